#include "chipmap/io.hpp"

#include "chipmap/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace chipmap {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { fail(ErrorKind::Validation, "io", msg); }

long to_key(const std::string& s, const char* what) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) bad(std::string(what) + " key '" + s + "' is not an integer");
  return v;
}

int get_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_integer()) bad(where + ": '" + key + "' must be an integer");
  return j[key].get<int>();
}

std::pair<int, int> get_pair(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2 || !j[key][0].is_number_integer() ||
      !j[key][1].is_number_integer()) {
    bad(std::string("backend: '") + key + "' must be a pair of integers");
  }
  return {j[key][0].get<int>(), j[key][1].get<int>()};
}

PhysCoord get_coord(const json& j, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object {chip, x, y}");
  return PhysCoord{get_int(j, "chip", where), get_int(j, "x", where), get_int(j, "y", where)};
}

json coord_json(const PhysCoord& c) { return json{{"chip", c.chip}, {"x", c.x}, {"y", c.y}}; }

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Validation, "io", "cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

CircuitInput circuit_from_json(const json& j) {
  if (!j.is_object()) bad("circuit: top level must be an object");
  CircuitInput c;
  c.n_qubits = get_int(j, "n_qubits", "circuit");
  if (c.n_qubits < 0) bad("circuit: n_qubits must be >= 0");
  if (!j.contains("gates") || !j["gates"].is_array()) bad("circuit: 'gates' must be an array");
  std::size_t idx = 0;
  for (const json& g : j["gates"]) {
    const std::string where = "gate " + std::to_string(idx++);
    if (!g.is_object() || !g.contains("op") || !g["op"].is_string()) bad(where + ": 'op' must be a string");
    if (!g.contains("qubits") || !g["qubits"].is_array()) bad(where + ": 'qubits' must be an array");
    GateNode node;
    for (const json& q : g["qubits"]) {
      if (!q.is_number_integer()) bad(where + ": qubit ids must be integers");
      node.qubits.push_back(q.get<int>());
    }
    node.name = g["op"].get<std::string>();
    node.kind = op_kind_from_name(node.name, node.qubits.size());
    if (g.contains("tag")) {
      if (!g["tag"].is_string()) bad(where + ": 'tag' must be a string");
      node.tag = g["tag"].get<std::string>();
    }
    c.gates.push_back(std::move(node));
  }
  if (j.contains("partitions") && !j["partitions"].is_null()) {
    if (!j["partitions"].is_object()) bad("circuit: 'partitions' must be an object");
    c.partitions.emplace();
    for (const auto& [k, v] : j["partitions"].items()) {
      if (!v.is_number_integer()) bad("circuit: partition of qubit " + k + " must be an integer");
      (*c.partitions)[static_cast<QubitId>(to_key(k, "partitions"))] = v.get<int>();
    }
  }
  if (j.contains("partition_geometry") && !j["partition_geometry"].is_null()) {
    if (!j["partition_geometry"].is_object()) bad("circuit: 'partition_geometry' must be an object");
    for (const auto& [k, v] : j["partition_geometry"].items()) {
      const std::string where = "partition_geometry " + k;
      if (!v.is_object()) bad(where + " must be an object");
      PartitionGeometry geo;
      geo.width = get_int(v, "width", where);
      geo.height = get_int(v, "height", where);
      if (v.contains("locals")) {
        if (!v["locals"].is_object()) bad(where + ": 'locals' must be an object");
        for (const auto& [qk, pos] : v["locals"].items()) {
          if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number_integer() || !pos[1].is_number_integer()) {
            bad(where + ": local of qubit " + qk + " must be [row, col]");
          }
          geo.locals[static_cast<QubitId>(to_key(qk, "locals"))] = LocalPos{pos[0].get<int>(), pos[1].get<int>()};
        }
      }
      c.geometry[static_cast<PartitionId>(to_key(k, "partition_geometry"))] = std::move(geo);
    }
  }
  if (j.contains("layout_hints") && !j["layout_hints"].is_null()) {
    if (!j["layout_hints"].is_object()) bad("circuit: 'layout_hints' must be an object");
    for (const auto& [k, v] : j["layout_hints"].items()) {
      const std::string where = "layout_hints " + k;
      if (!v.is_object() || !v.contains("dir") || !v["dir"].is_string()) bad(where + ": 'dir' must be a string");
      LayoutHint h;
      h.dir = parse_direction(v["dir"].get<std::string>());
      h.ref = get_int(v, "ref", where);
      c.hints[static_cast<PartitionId>(to_key(k, "layout_hints"))] = h;
    }
  }
  return c;
}

json gate_to_json(const GateNode& g) {
  json out{{"op", g.name.empty() ? std::string(canonical_name(g.kind)) : g.name}, {"qubits", g.qubits}};
  if (!g.tag.empty()) out["tag"] = g.tag;
  return out;
}

json to_json(const CircuitInput& c) {
  json j{{"n_qubits", c.n_qubits}};
  json gates = json::array();
  for (const GateNode& g : c.gates) gates.push_back(gate_to_json(g));
  j["gates"] = std::move(gates);
  if (c.partitions) {
    json p = json::object();
    for (const auto& [q, pid] : *c.partitions) p[std::to_string(q)] = pid;
    j["partitions"] = std::move(p);
  }
  if (!c.geometry.empty()) {
    json geo = json::object();
    for (const auto& [pid, g] : c.geometry) {
      json locals = json::object();
      for (const auto& [q, pos] : g.locals) locals[std::to_string(q)] = json::array({pos.row, pos.col});
      geo[std::to_string(pid)] = json{{"width", g.width}, {"height", g.height}, {"locals", std::move(locals)}};
    }
    j["partition_geometry"] = std::move(geo);
  }
  if (!c.hints.empty()) {
    json hints = json::object();
    for (const auto& [pid, h] : c.hints) hints[std::to_string(pid)] = json{{"dir", to_string(h.dir)}, {"ref", h.ref}};
    j["layout_hints"] = std::move(hints);
  }
  return j;
}

EpsilonSpec parse_eps_spec(std::string_view text, std::uint64_t seed) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(':', start), text.size());
    const std::string_view tok = text.substr(start, end - start);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      bad("eps spec '" + std::string(text) + "' must be <base> or <base>:<lo>:<hi>");
    }
    parts.push_back(v);
    start = end + 1;
  }
  EpsilonSpec eps;
  eps.seed = seed;
  eps.base = parts[0];
  if (parts.size() == 3) {
    eps.randomized = true;
    eps.scale_lo = parts[1];
    eps.scale_hi = parts[2];
  } else if (parts.size() != 1) {
    bad("eps spec '" + std::string(text) + "' must be <base> or <base>:<lo>:<hi>");
  }
  return eps;
}

BackendSpec backend_from_json(const json& j, std::uint64_t default_seed, std::vector<std::string>* warnings) {
  if (!j.is_object()) bad("backend: top level must be an object");
  BackendSpec spec;
  std::tie(spec.grid_rows, spec.grid_cols) = get_pair(j, "grid");
  std::tie(spec.chip_w, spec.chip_h) = get_pair(j, "chiplet");
  if (j.contains("allow_non_pow2")) spec.allow_non_pow2 = j["allow_non_pow2"].get<bool>();
  if (j.contains("links") && j.contains("auto_links")) bad("backend: give either 'links' or 'auto_links', not both");
  if (j.contains("links")) {
    if (!j["links"].is_array()) bad("backend: 'links' must be an array");
    std::size_t idx = 0;
    for (const json& l : j["links"]) {
      const std::string where = "link " + std::to_string(idx++);
      if (!l.is_object() || !l.contains("a") || !l.contains("b")) bad(where + ": needs 'a' and 'b'");
      if (!l.contains("eps") || !l["eps"].is_number()) bad(where + ": 'eps' must be a number");
      spec.links.push_back(InterChipLink{get_coord(l["a"], where + ".a"), get_coord(l["b"], where + ".b"),
                                         l["eps"].get<double>()});
    }
  }
  if (j.contains("auto_links")) {
    const json& a = j["auto_links"];
    if (!a.is_object()) bad("backend: 'auto_links' must be an object");
    const int per_edge = get_int(a, "per_edge", "auto_links");
    EpsilonSpec eps;
    eps.seed = default_seed;
    if (!a.contains("eps")) bad("auto_links: 'eps' is required");
    const json& e = a["eps"];
    if (e.is_number()) {
      eps.base = e.get<double>();
    } else if (e.is_object()) {
      if (!e.contains("base") || !e["base"].is_number()) bad("auto_links.eps: 'base' must be a number");
      eps.base = e["base"].get<double>();
      if (e.contains("scale_range")) {
        const json& r = e["scale_range"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
          bad("auto_links.eps: 'scale_range' must be [lo, hi]");
        }
        eps.randomized = true;
        eps.scale_lo = r[0].get<double>();
        eps.scale_hi = r[1].get<double>();
        if (eps.scale_lo > eps.scale_hi) bad("auto_links.eps: scale_range lo exceeds hi");
      }
      if (e.contains("seed")) eps.seed = e["seed"].get<std::uint64_t>();
    } else {
      bad("auto_links: 'eps' must be a number or an object");
    }
    spec.links = generate_links(spec.grid_rows, spec.grid_cols, spec.chip_w, spec.chip_h, per_edge, eps, warnings);
  }
  if (j.contains("defects")) {
    if (!j["defects"].is_array()) bad("backend: 'defects' must be an array");
    std::size_t idx = 0;
    for (const json& d : j["defects"]) spec.defects.push_back(get_coord(d, "defect " + std::to_string(idx++)));
  }
  return spec;
}

json to_json(const BackendSpec& spec) {
  json links = json::array();
  for (const auto& l : spec.links) links.push_back(json{{"a", coord_json(l.a)}, {"b", coord_json(l.b)}, {"eps", l.epsilon}});
  json defects = json::array();
  for (const auto& d : spec.defects) defects.push_back(coord_json(d));
  json j{{"grid", json::array({spec.grid_rows, spec.grid_cols})},
         {"chiplet", json::array({spec.chip_w, spec.chip_h})},
         {"links", std::move(links)},
         {"defects", std::move(defects)}};
  if (spec.allow_non_pow2) j["allow_non_pow2"] = true;
  return j;
}

json compiled_to_json(const CompiledCircuit& c, const ChipletBackend& backend) {
  json gates = json::array();
  for (const GateNode& g : c.dag.nodes()) gates.push_back(gate_to_json(g));
  return json{
      {"schema_version", kSchemaVersion},
      {"backend", json{{"grid", json::array({backend.grid_rows(), backend.grid_cols()})},
                       {"chiplet", json::array({backend.chip_w(), backend.chip_h()})}}},
      {"n_physical_qubits", backend.num_qubits()},
      {"gates", std::move(gates)},
      {"initial_layout", c.initial_layout},
      {"final_layout", c.final_layout},
      {"swap_count", c.swap_count},
      {"link_usage", c.link_usage},
      {"link_traversals", c.link_traversals},
      {"patch_violations", c.patch_violations},
      {"warnings", c.warnings},
  };
}

json placements_to_json(const PartitionRegistry& registry) {
  std::vector<const Partition*> ordered;
  for (const Partition& p : registry.partitions()) {
    if (p.placement) ordered.push_back(&p);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Partition* a, const Partition* b) { return a->sigma.value_or(0) < b->sigma.value_or(0); });
  json out = json::array();
  for (const Partition* p : ordered) {
    const Rect& r = p->placement->rect;
    out.push_back(json{{"partition", p->id},
                       {"sigma", p->sigma.value_or(-1)},
                       {"chip", p->placement->chip},
                       {"x", r.x},
                       {"y", r.y},
                       {"w", r.w},
                       {"h", r.h}});
  }
  return json{{"schema_version", kSchemaVersion}, {"placements", std::move(out)}};
}

json mapping_to_json(const PartitionRegistry& registry) {
  std::map<QubitId, PhysCoord> flat;
  for (const Partition& p : registry.partitions()) {
    if (!p.phi) continue;
    for (const auto& [q, c] : *p.phi) flat[q] = c;
  }
  json out = json::object();
  for (const auto& [q, c] : flat) out[std::to_string(q)] = coord_json(c);
  return out;
}

std::vector<std::string> validate_compiled(const json& j, const ChipletBackend* backend) {
  std::vector<std::string> errs;
  if (!j.is_object()) return {"document must be an object"};
  auto need = [&](const char* key, bool ok) {
    if (!j.contains(key)) {
      errs.push_back(std::string("missing '") + key + "'");
      return false;
    }
    if (!ok) errs.push_back(std::string("'") + key + "' has the wrong type");
    return ok;
  };
  if (need("schema_version", j.contains("schema_version") && j["schema_version"].is_number_integer()) &&
      j["schema_version"].get<int>() != kSchemaVersion) {
    errs.push_back("unsupported schema_version " + j["schema_version"].dump());
  }
  const bool have_n = need("n_physical_qubits", j.contains("n_physical_qubits") && j["n_physical_qubits"].is_number_integer());
  const long n = have_n ? j["n_physical_qubits"].get<long>() : -1;
  if (backend && have_n && n != backend->num_qubits()) errs.push_back("n_physical_qubits does not match the backend");
  need("swap_count", j.contains("swap_count") && j["swap_count"].is_number_unsigned());
  for (const char* key : {"link_usage", "link_traversals", "initial_layout", "final_layout"}) {
    if (need(key, j.contains(key) && j[key].is_array())) {
      for (const json& v : j[key]) {
        if (!v.is_number_integer()) {
          errs.push_back(std::string("'") + key + "' must hold integers");
          break;
        }
      }
    }
  }
  for (const char* key : {"initial_layout", "final_layout"}) {
    if (!j.contains(key) || !j[key].is_array() || n < 0) continue;
    std::set<long> seen;
    for (const json& v : j[key]) {
      if (!v.is_number_integer()) break;
      const long p = v.get<long>();
      if (p < 0 || p >= n) errs.push_back(std::string(key) + " entry " + std::to_string(p) + " is out of range");
      if (!seen.insert(p).second) errs.push_back(std::string(key) + " maps two qubits to " + std::to_string(p));
    }
  }
  if (j.contains("initial_layout") && j.contains("final_layout") && j["initial_layout"].is_array() &&
      j["final_layout"].is_array() && j["initial_layout"].size() != j["final_layout"].size()) {
    errs.push_back("initial_layout and final_layout differ in length");
  }
  if (need("gates", j.contains("gates") && j["gates"].is_array())) {
    std::size_t idx = 0;
    for (const json& g : j["gates"]) {
      const std::string where = "gate " + std::to_string(idx++);
      if (!g.is_object() || !g.contains("op") || !g["op"].is_string() || !g.contains("qubits") ||
          !g["qubits"].is_array() || g["qubits"].empty()) {
        errs.push_back(where + ": needs string 'op' and nonempty 'qubits'");
        continue;
      }
      std::vector<long> qs;
      bool ints = true;
      for (const json& q : g["qubits"]) {
        if (!q.is_number_integer()) {
          ints = false;
          break;
        }
        qs.push_back(q.get<long>());
      }
      if (!ints) {
        errs.push_back(where + ": qubit ids must be integers");
        continue;
      }
      for (long q : qs) {
        if (n >= 0 && (q < 0 || q >= n)) errs.push_back(where + ": qubit " + std::to_string(q) + " out of range");
      }
      const OpKind kind = [&] {
        try {
          return op_kind_from_name(g["op"].get<std::string>(), qs.size());
        } catch (const CompileError&) {
          return OpKind::Barrier;
        }
      }();
      if (is_two_qubit(kind) && qs.size() != 2) errs.push_back(where + ": two-qubit op needs 2 qubits");
      if (backend && is_two_qubit(kind) && qs.size() == 2 && qs[0] >= 0 && qs[1] >= 0 && qs[0] < n && qs[1] < n &&
          !backend->coupled(static_cast<int>(qs[0]), static_cast<int>(qs[1]))) {
        errs.push_back(where + ": qubits " + std::to_string(qs[0]) + "," + std::to_string(qs[1]) + " are not coupled");
      }
    }
  }
  return errs;
}

}  // namespace chipmap
