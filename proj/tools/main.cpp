#include "yaml_json.hpp"

#include <chipmap/benchgen.hpp>
#include <chipmap/error.hpp>
#include <chipmap/io.hpp>
#include <chipmap/pipeline.hpp>
#include <chipmap/render.hpp>
#include <chipmap/sweep.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kOther = 1, kValidation = 2, kNoFit = 3, kNoRoute = 4, kStrict = 5 };

int exit_code(chipmap::ErrorKind kind) {
  switch (kind) {
    case chipmap::ErrorKind::Validation:
    case chipmap::ErrorKind::StageOrder: return kValidation;
    case chipmap::ErrorKind::NoFit:
    case chipmap::ErrorKind::Infeasible: return kNoFit;
    case chipmap::ErrorKind::NoRoute: return kNoRoute;
    case chipmap::ErrorKind::StrictPatchViolation: return kStrict;
  }
  return kOther;
}

struct Logger {
  bool json_lines = false;

  void log(const std::string& level, const std::string& msg, json extra = json::object()) const {
    if (json_lines) {
      extra["level"] = level;
      extra["msg"] = msg;
      std::cerr << extra.dump() << '\n';
    } else {
      std::cerr << level << ": " << msg << '\n';
    }
  }
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool json_logs = false;
};

struct CompileArgs {
  std::string circuit;
  std::string backend;
  std::string partitions;
  double imbalance = 0.03;
  std::string placement = "center";
  std::string relative_ref = "weight";
  std::string route = "basic";
  std::optional<double> alpha;
  std::optional<double> beta;
  int k_nearest = 3;
  bool no_restore = false;
  bool strict_patches = false;
  bool cx_expand = false;
  std::string util_denominator = "used";
  bool svg = false;
  bool gnuplot = false;
};

struct BenchArgs {
  std::string kind = "ls-cnot";
  int d = 3;
  int cnots = 1;
  int rounds = 1;
  double headroom = 0.30;
  int n_inter = 8;
  std::string eps = "0.001";
  std::string grid;
};

struct SweepArgs {
  std::string spec;
  std::string output = "results.csv";
  std::optional<int> workers;
  bool wall_time = false;
};

struct ValidateArgs {
  std::string file;
  std::string backend;
};

struct RenderArgs {
  std::string placements;
  std::string backend;
  std::string output = "layout.svg";
  int cell = 12;
};

std::string env_name(const std::string& long_name) {
  std::string out = "CHIPMAP_";
  for (char c : long_name) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

/// Every named flag, in every subcommand, reads CHIPMAP_<FLAG> when absent.
void attach_env(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help") continue;
    opt->envname(env_name(names.front()));
  }
  for (CLI::App* sub : app.get_subcommands({})) attach_env(*sub);
}

chipmap::ChipletBackend load_backend(const std::string& path, const Globals& g, const Logger& log) {
  std::vector<std::string> warnings;
  const auto spec = chipmap::backend_from_json(chipmap::read_json_file(path), g.seed, &warnings);
  for (const auto& w : warnings) log.log("warning", w);
  return chipmap::ChipletBackend::build(spec);
}

int run_compile(const CompileArgs& a, const Globals& g, const Logger& log) {
  const auto circuit = chipmap::circuit_from_json(chipmap::read_json_file(a.circuit));
  const auto backend = load_backend(a.backend, g, log);

  chipmap::CompileOptions opts;
  if (!a.partitions.empty()) opts.partitions = chipmap::parse_partition_source(a.partitions);
  opts.kway.imbalance = a.imbalance;
  opts.placement = chipmap::parse_placement_mode(a.placement);
  opts.relative_ref = chipmap::parse_relative_ref(a.relative_ref);
  opts.routing = chipmap::RoutingConfig::for_policy(chipmap::parse_routing_policy(a.route));
  if (a.alpha) opts.routing.alpha = *a.alpha;
  if (a.beta) opts.routing.beta = *a.beta;
  opts.routing.k_nearest = a.k_nearest;
  opts.routing.restore_mapping = !a.no_restore;
  opts.routing.strict_patches = a.strict_patches;
  opts.stats.util_denominator = chipmap::parse_util_denominator(a.util_denominator);
  opts.stats.cx_expand = a.cx_expand;

  const auto result = chipmap::compile(circuit, backend, opts);
  for (const auto& w : result.warnings) log.log("warning", w);

  const json compiled = chipmap::compiled_to_json(result.compiled, backend);
  if (const auto errs = chipmap::validate_compiled(compiled, &backend); !errs.empty()) {
    for (const auto& e : errs) log.log("error", "compiled output failed validation: " + e);
    return kOther;
  }
  const fs::path out = g.out_dir;
  chipmap::write_json_file(out / "compiled.json", compiled);
  chipmap::write_json_file(out / "stats.json", chipmap::to_json(result.stats));
  chipmap::write_json_file(out / "placements.json", chipmap::placements_to_json(result.registry));
  chipmap::write_json_file(out / "mapping.json", chipmap::mapping_to_json(result.registry));
  if (a.svg) chipmap::write_text_file(out / "layout.svg", chipmap::render_layout_svg(backend, result.placements));
  if (a.gnuplot) chipmap::write_text_file(out / "stats.dat", chipmap::gnuplot_dump(result.stats));

  const auto& s = result.stats;
  log.log("info", "compiled", json{{"swaps", s.swap_count},
                                   {"gate_overhead", s.gate_overhead},
                                   {"depth_overhead", s.depth_overhead},
                                   {"inter_chiplet_2q", s.inter_chiplet_2q},
                                   {"utilization", s.utilization}});
  return kOk;
}

int run_bench(const BenchArgs& a, const Globals& g, const Logger& log) {
  chipmap::CircuitInput circuit;
  if (a.kind == "memory") {
    circuit = chipmap::gen_memory_circuit(a.d, a.rounds);
  } else if (a.kind == "ls-cnot") {
    circuit = chipmap::gen_ls_cnot_circuit(a.d, a.cnots, a.rounds);
  } else {
    chipmap::fail(chipmap::ErrorKind::Validation, "benchgen", "--kind must be memory or ls-cnot");
  }
  chipmap::BackendGenOptions bopts;
  bopts.headroom = a.headroom;
  bopts.n_inter = a.n_inter;
  bopts.eps = chipmap::parse_eps_spec(a.eps, g.seed);
  if (!a.grid.empty()) {
    const auto x = a.grid.find('x');
    if (x == std::string::npos) chipmap::fail(chipmap::ErrorKind::Validation, "benchgen", "--grid must be ROWSxCOLS");
    bopts.grid = std::pair{std::stoi(a.grid.substr(0, x)), std::stoi(a.grid.substr(x + 1))};
  }
  std::vector<std::string> warnings;
  const auto spec = chipmap::gen_backend_for(circuit, bopts, &warnings);
  for (const auto& w : warnings) log.log("warning", w);
  const fs::path out = g.out_dir;
  chipmap::write_json_file(out / "circuit.json", chipmap::to_json(circuit));
  chipmap::write_json_file(out / "backend.json", chipmap::to_json(spec));
  log.log("info", "generated", json{{"n_qubits", circuit.n_qubits}, {"gates", circuit.gates.size()}});
  return kOk;
}

int run_sweep_cmd(const SweepArgs& a, const Globals& g, const Logger& log) {
  json spec = load_config_file(a.spec);
  if (spec.is_object() && !spec.contains("seed")) spec["seed"] = g.seed;
  auto cfg = chipmap::sweep_config_from_json(spec);
  if (a.workers) cfg.workers = *a.workers;
  if (a.wall_time) cfg.wall_time = true;
  const auto table = chipmap::run_sweep(cfg);
  const fs::path out = fs::path(a.output).is_absolute() ? fs::path(a.output) : fs::path(g.out_dir) / a.output;
  chipmap::write_text_file(out, table.to_csv());
  log.log("info", "sweep finished", json{{"rows", table.rows.size()}, {"output", out.string()}});
  return kOk;
}

int run_validate(const ValidateArgs& a, const Globals& g, const Logger& log) {
  const json doc = chipmap::read_json_file(a.file);
  std::vector<std::string> errs;
  std::string what;
  if (doc.is_object() && doc.contains("initial_layout")) {
    what = "compiled";
    std::optional<chipmap::ChipletBackend> backend;
    if (!a.backend.empty()) backend = load_backend(a.backend, g, log);
    errs = chipmap::validate_compiled(doc, backend ? &*backend : nullptr);
  } else {
    try {
      if (doc.is_object() && doc.contains("grid")) {
        what = "backend";
        chipmap::ChipletBackend::build(chipmap::backend_from_json(doc, g.seed));
      } else {
        what = "circuit";
        const auto circuit = chipmap::circuit_from_json(doc);
        const auto dag = circuit.dag();
        if (circuit.partitions) chipmap::predefined_partitions(dag, *circuit.partitions, circuit.geometry);
      }
    } catch (const chipmap::CompileError& e) {
      errs.push_back(e.what());
    }
  }
  for (const auto& e : errs) log.log("error", what + ": " + e);
  if (!errs.empty()) return kValidation;
  log.log("info", what + " is valid");
  return kOk;
}

int run_render(const RenderArgs& a, const Globals& g, const Logger& log) {
  const auto backend = load_backend(a.backend, g, log);
  const json doc = chipmap::read_json_file(a.placements);
  std::vector<chipmap::Placement> placements;
  try {
    for (const json& p : doc.at("placements")) {
      placements.push_back(chipmap::Placement{
          p.at("partition").get<int>(), p.at("chip").get<int>(),
          chipmap::Rect{p.at("x").get<int>(), p.at("y").get<int>(), p.at("w").get<int>(), p.at("h").get<int>()}});
    }
  } catch (const json::exception& e) {
    chipmap::fail(chipmap::ErrorKind::Validation, "io", a.placements + ": " + e.what());
  }
  chipmap::RenderOptions ropts;
  ropts.cell = a.cell;
  const fs::path out = fs::path(a.output).is_absolute() ? fs::path(a.output) : fs::path(g.out_dir) / a.output;
  chipmap::write_text_file(out, chipmap::render_layout_svg(backend, placements, ropts));
  log.log("info", "wrote " + out.string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chipmap: maps fault-tolerant circuits onto chiplet architectures"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
  app.add_flag("--json-logs", g.json_logs, "Emit log lines as JSON on stderr");

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile a circuit onto a backend");
  compile->add_option("circuit", ca.circuit, "Circuit JSON")->required()->check(CLI::ExistingFile);
  compile->add_option("backend", ca.backend, "Backend JSON")->required()->check(CLI::ExistingFile);
  compile->add_option("--partitions", ca.partitions, "auto | predefined (default: predefined when present)")
      ->check(CLI::IsMember({"auto", "predefined"}));
  compile->add_option("--imbalance", ca.imbalance, "k-way block imbalance")->capture_default_str();
  compile->add_option("--placement", ca.placement, "center | size-aware")
      ->check(CLI::IsMember({"center", "size-aware"}))
      ->capture_default_str();
  compile->add_option("--relative-ref", ca.relative_ref, "weight | order")
      ->check(CLI::IsMember({"weight", "order"}))
      ->capture_default_str();
  compile->add_option("--route", ca.route, "basic | focus | tradeoff | custom")
      ->check(CLI::IsMember({"basic", "focus", "tradeoff", "custom"}))
      ->capture_default_str();
  compile->add_option("--alpha", ca.alpha, "Link error weight (overrides the policy default)");
  compile->add_option("--beta", ca.beta, "Link congestion weight (overrides the policy default)");
  compile->add_option("--k-nearest", ca.k_nearest, "Candidate links per crossing")->capture_default_str();
  compile->add_flag("--no-restore", ca.no_restore, "Leave qubits where routing moved them");
  compile->add_flag("--strict-patches", ca.strict_patches, "Fail instead of warning when a patch needs routing");
  compile->add_flag("--cx-expand", ca.cx_expand, "Count each SWAP as three CX in the gate overhead");
  compile->add_option("--util-denominator", ca.util_denominator, "used | all")
      ->check(CLI::IsMember({"used", "all"}))
      ->capture_default_str();
  compile->add_flag("--svg", ca.svg, "Also write layout.svg");
  compile->add_flag("--gnuplot", ca.gnuplot, "Also write stats.dat");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Benchmark utilities");
  bench->require_subcommand(1);
  auto* gen = bench->add_subcommand("gen", "Generate a circuit and a matching backend");
  gen->add_option("--kind", ba.kind, "memory | ls-cnot")
      ->check(CLI::IsMember({"memory", "ls-cnot"}))
      ->capture_default_str();
  gen->add_option("--d", ba.d, "Code distance (odd, >= 3)")->capture_default_str();
  gen->add_option("--cnots", ba.cnots, "Number of lattice-surgery CNOTs")->capture_default_str();
  gen->add_option("--rounds", ba.rounds, "Stabilizer rounds")->capture_default_str();
  gen->add_option("--headroom", ba.headroom, "Chiplet area above one patch")->capture_default_str();
  gen->add_option("--n-inter", ba.n_inter, "Links per chiplet edge")->capture_default_str();
  gen->add_option("--eps", ba.eps, "Link error: <base> or <base>:<lo>:<hi>")->capture_default_str();
  gen->add_option("--grid", ba.grid, "Chiplet grid ROWSxCOLS (default: derived)");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write a CSV");
  sweep->add_option("spec", sa.spec, "Sweep spec (.yaml, .yml or .json)")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", sa.output, "CSV path, relative to --out-dir")->capture_default_str();
  sweep->add_option("--workers", sa.workers, "Worker threads (overrides the spec)");
  sweep->add_flag("--wall-time", sa.wall_time, "Add per-stage timing columns");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a circuit, backend or compiled JSON file");
  validate->add_option("file", va.file, "File to check")->required()->check(CLI::ExistingFile);
  validate->add_option("--backend", va.backend, "Backend for coupling checks of compiled files")
      ->check(CLI::ExistingFile);

  RenderArgs ra;
  auto* render = app.add_subcommand("render-layout", "Draw placements as SVG");
  render->add_option("placements", ra.placements, "placements.json from compile")->required()->check(CLI::ExistingFile);
  render->add_option("backend", ra.backend, "Backend JSON")->required()->check(CLI::ExistingFile);
  render->add_option("-o,--output", ra.output, "SVG path, relative to --out-dir")->capture_default_str();
  render->add_option("--cell", ra.cell, "Pixels per qubit")->capture_default_str();

  attach_env(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  const Logger log{g.json_logs};
  try {
    if (*compile) return run_compile(ca, g, log);
    if (*gen) return run_bench(ba, g, log);
    if (*sweep) return run_sweep_cmd(sa, g, log);
    if (*validate) return run_validate(va, g, log);
    if (*render) return run_render(ra, g, log);
  } catch (const chipmap::CompileError& e) {
    json extra{{"stage", e.stage()}, {"kind", chipmap::to_string(e.kind())}};
    std::string text = e.what();
    if (text.rfind(e.stage() + ": ", 0) == 0) text.erase(0, e.stage().size() + 2);
    std::string msg = "[" + e.stage() + "] " + chipmap::to_string(e.kind()) + ": " + text;
    if (e.entity()) {
      extra["entity"] = *e.entity();
      msg += " (id " + std::to_string(*e.entity()) + ")";
    }
    log.log("error", msg, extra);
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    log.log("error", e.what());
    return kOther;
  }
  return kOther;
}
