#include "chipmap/metrics.hpp"

#include "chipmap/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace chipmap {

UtilDenominator parse_util_denominator(std::string_view s) {
  if (s == "used") return UtilDenominator::Used;
  if (s == "all") return UtilDenominator::All;
  fail(ErrorKind::Validation, "metrics", "unknown utilization denominator '" + std::string(s) + "'");
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  if (den == 0) return num == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

CompileStats stats(const CircuitDag& original, const CompiledCircuit& compiled, const ChipletBackend& backend,
                   const PartitionRegistry& registry, const StatsOptions& options) {
  CompileStats s;
  s.depth_original = original.depth();
  s.depth_compiled = compiled.dag.depth();
  s.depth_overhead = ratio(static_cast<std::size_t>(s.depth_compiled), static_cast<std::size_t>(s.depth_original));

  s.gates2q_original = original.two_qubit_count();
  s.gates2q_compiled = compiled.dag.two_qubit_count();
  s.gate_overhead = ratio(s.gates2q_compiled, s.gates2q_original);
  const std::size_t swaps_in_dag = compiled.dag.count(OpKind::Swap);
  s.gates2q_compiled_cx = s.gates2q_compiled + 2 * swaps_in_dag;
  s.gate_overhead_cx = ratio(s.gates2q_compiled_cx, s.gates2q_original + 2 * original.count(OpKind::Swap));

  if (options.cx_expand) {
    s.gates2q_original += 2 * original.count(OpKind::Swap);
    s.gates2q_compiled = s.gates2q_compiled_cx;
    s.gate_overhead = s.gate_overhead_cx;
  }

  s.swap_count = compiled.swap_count;
  for (const GateNode& g : compiled.dag.nodes()) {
    if (is_two_qubit(g.kind) && backend.chip_of(g.qubits[0]) != backend.chip_of(g.qubits[1])) ++s.inter_chiplet_2q;
  }
  for (int t : compiled.link_traversals) s.link_traversals += static_cast<std::size_t>(t);
  s.patch_violations = compiled.patch_violations;

  std::set<ChipId> used;
  for (const Partition& p : registry.partitions()) {
    if (p.placement) used.insert(p.placement->chip);
  }
  s.n_qubits = registry.num_qubits();
  s.used_chiplets = static_cast<int>(used.size());
  const int chips = options.util_denominator == UtilDenominator::Used ? s.used_chiplets : backend.num_chiplets();
  const long area = static_cast<long>(chips) * backend.qubits_per_chiplet();
  s.utilization = area > 0 ? static_cast<double>(s.n_qubits) / static_cast<double>(area) : 0.0;
  return s;
}

nlohmann::json to_json(const CompileStats& s) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j{
      {"schema_version", 1},
      {"depth_original", s.depth_original},
      {"depth_compiled", s.depth_compiled},
      {"depth_overhead", num(s.depth_overhead)},
      {"gates2q_original", s.gates2q_original},
      {"gates2q_compiled", s.gates2q_compiled},
      {"gate_overhead", num(s.gate_overhead)},
      {"gates2q_compiled_cx", s.gates2q_compiled_cx},
      {"gate_overhead_cx", num(s.gate_overhead_cx)},
      {"swap_count", s.swap_count},
      {"inter_chiplet_2q", s.inter_chiplet_2q},
      {"link_traversals", s.link_traversals},
      {"patch_violations", s.patch_violations},
      {"n_qubits", s.n_qubits},
      {"used_chiplets", s.used_chiplets},
      {"utilization", s.utilization},
  };
  nlohmann::json wall = nlohmann::json::object();
  for (const auto& [stage, sec] : s.wall_time) wall[stage] = sec;
  j["wall_time"] = wall;
  return j;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

const std::vector<std::string> kColumns = {
    "depth_original",  "depth_compiled",      "depth_overhead",   "gates2q_original", "gates2q_compiled",
    "gate_overhead",   "gates2q_compiled_cx", "gate_overhead_cx", "swap_count",       "inter_chiplet_2q",
    "link_traversals", "patch_violations",    "n_qubits",         "used_chiplets",    "utilization",
};
const std::vector<std::string> kStages = {"partition", "sequence", "gmap", "lmap", "route", "metrics"};

}  // namespace

std::vector<std::string> csv_columns(bool with_wall_time) {
  auto cols = kColumns;
  if (with_wall_time) {
    for (const auto& st : kStages) cols.push_back("time_" + st);
  }
  return cols;
}

std::vector<std::string> csv_row(const CompileStats& s, bool with_wall_time) {
  std::vector<std::string> row = {
      std::to_string(s.depth_original),   std::to_string(s.depth_compiled),   format_number(s.depth_overhead),
      std::to_string(s.gates2q_original), std::to_string(s.gates2q_compiled), format_number(s.gate_overhead),
      std::to_string(s.gates2q_compiled_cx), format_number(s.gate_overhead_cx), std::to_string(s.swap_count),
      std::to_string(s.inter_chiplet_2q), std::to_string(s.link_traversals), std::to_string(s.patch_violations),
      std::to_string(s.n_qubits),         std::to_string(s.used_chiplets),    format_number(s.utilization),
  };
  if (with_wall_time) {
    for (const auto& st : kStages) {
      double t = 0.0;
      for (const auto& [name, sec] : s.wall_time) {
        if (name == st) t = sec;
      }
      row.push_back(format_number(t));
    }
  }
  return row;
}

std::string gnuplot_dump(const CompileStats& s) {
  std::string out = "#";
  for (const auto& c : csv_columns(true)) out += " " + c;
  out += "\n";
  bool first = true;
  for (const auto& v : csv_row(s, true)) {
    if (!first) out += " ";
    out += v;
    first = false;
  }
  out += "\n";
  return out;
}

}  // namespace chipmap
