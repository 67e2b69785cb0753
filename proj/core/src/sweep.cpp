#include "chipmap/sweep.hpp"

#include "chipmap/benchgen.hpp"
#include "chipmap/error.hpp"
#include "chipmap/io.hpp"
#include "chipmap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <set>
#include <thread>

namespace chipmap {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { fail(ErrorKind::Validation, "sweep", msg); }

template <class T>
std::vector<T> axis_values(const json& v, const std::string& name) {
  std::vector<T> out;
  if (!v.is_array()) {
    out.push_back(v.get<T>());
  } else {
    for (const json& e : v) out.push_back(e.get<T>());
  }
  if (out.empty()) bad("axis '" + name + "' is empty");
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<PhysCoord> random_defects(const BackendSpec& spec, int count, std::uint64_t seed) {
  const int per_chip = spec.chip_w * spec.chip_h;
  const int total = spec.grid_rows * spec.grid_cols * per_chip;
  if (count > total) bad("more defects requested than qubits");
  std::mt19937_64 rng(seed);
  std::set<int> chosen;
  while (static_cast<int>(chosen.size()) < count) {
    chosen.insert(static_cast<int>(rng() % static_cast<std::uint64_t>(total)));
  }
  std::vector<PhysCoord> out;
  for (int id : chosen) {
    const int local = id % per_chip;
    out.push_back(PhysCoord{id / per_chip, local % spec.chip_w, local / spec.chip_w});
  }
  return out;
}

std::vector<std::string> run_point(const SweepConfig& cfg, const SweepPoint& pt, std::size_t index) {
  std::vector<std::string> row = {
      std::to_string(index),
      cfg.kind,
      std::to_string(pt.d),
      std::to_string(pt.n_cnots),
      std::to_string(pt.n_inter),
      std::to_string(pt.defects),
      pt.policy,
  };
  std::string status = "ok";
  std::string error;
  std::vector<std::string> stats_cols;
  RoutingConfig routing = RoutingConfig::for_policy(parse_routing_policy(pt.policy));
  if (pt.alpha) routing.alpha = *pt.alpha;
  if (pt.beta) routing.beta = *pt.beta;
  row.push_back(format_number(routing.alpha));
  row.push_back(format_number(routing.beta));
  try {
    const CircuitInput circuit =
        cfg.kind == "memory" ? gen_memory_circuit(pt.d, cfg.rounds) : gen_ls_cnot_circuit(pt.d, pt.n_cnots, cfg.rounds);
    BackendGenOptions bopts;
    bopts.headroom = cfg.headroom;
    bopts.grid = cfg.grid;
    bopts.n_inter = pt.n_inter;
    bopts.eps = cfg.eps;
    BackendSpec spec = gen_backend_for(circuit, bopts);
    const std::uint64_t point_seed = cfg.seed ^ ((static_cast<std::uint64_t>(index) + 1) * 0x9E3779B97F4A7C15ULL);
    spec.defects = random_defects(spec, pt.defects, point_seed);
    const ChipletBackend backend = ChipletBackend::build(spec);
    CompileOptions copts;
    copts.placement = cfg.placement;
    copts.routing = routing;
    const CompileResult res = compile(circuit, backend, copts);
    stats_cols = csv_row(res.stats, cfg.wall_time);
  } catch (const CompileError& e) {
    status = to_string(e.kind());
    error = e.stage() + ": " + e.what();
  } catch (const std::exception& e) {
    status = "error";
    error = e.what();
  }
  row.push_back(status);
  row.push_back(error);
  stats_cols.resize(csv_columns(cfg.wall_time).size());
  row.insert(row.end(), stats_cols.begin(), stats_cols.end());
  return row;
}

}  // namespace

SweepConfig sweep_config_from_json(const json& j) {
  if (!j.is_object()) bad("sweep config must be an object");
  SweepConfig cfg;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "kind") {
        cfg.kind = v.get<std::string>();
      } else if (key == "rounds") {
        cfg.rounds = v.get<int>();
      } else if (key == "headroom") {
        cfg.headroom = v.get<double>();
      } else if (key == "grid") {
        cfg.grid = std::pair{v.at(0).get<int>(), v.at(1).get<int>()};
      } else if (key == "eps") {
        if (v.is_number()) {
          cfg.eps.base = v.get<double>();
        } else {
          cfg.eps.base = v.at("base").get<double>();
          if (v.contains("scale_range")) {
            cfg.eps.randomized = true;
            cfg.eps.scale_lo = v["scale_range"].at(0).get<double>();
            cfg.eps.scale_hi = v["scale_range"].at(1).get<double>();
          }
        }
      } else if (key == "placement") {
        cfg.placement = parse_placement_mode(v.get<std::string>());
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "workers") {
        cfg.workers = v.get<int>();
      } else if (key == "wall_time") {
        cfg.wall_time = v.get<bool>();
      } else if (key == "axes") {
        if (!v.is_object()) bad("'axes' must be an object");
        for (const auto& [axis, vals] : v.items()) {
          if (axis == "d") {
            cfg.d = axis_values<int>(vals, axis);
          } else if (axis == "n_cnots" || axis == "cnots") {
            cfg.n_cnots = axis_values<int>(vals, axis);
          } else if (axis == "n_inter") {
            cfg.n_inter = axis_values<int>(vals, axis);
          } else if (axis == "defects") {
            cfg.defects = axis_values<int>(vals, axis);
          } else if (axis == "policy") {
            cfg.policy = axis_values<std::string>(vals, axis);
          } else if (axis == "alpha") {
            cfg.alpha = axis_values<double>(vals, axis);
          } else if (axis == "beta") {
            cfg.beta = axis_values<double>(vals, axis);
          } else {
            bad("unknown sweep axis '" + axis + "'");
          }
        }
      } else {
        bad("unknown sweep key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    bad(std::string("malformed sweep config: ") + e.what());
  }
  cfg.eps.seed = cfg.seed;
  return cfg;
}

std::vector<SweepPoint> expand(const SweepConfig& c) {
  if (c.kind != "memory" && c.kind != "ls-cnot") bad("kind must be 'memory' or 'ls-cnot'");
  if (c.workers < 1) bad("workers must be >= 1");
  for (int d : c.d) {
    if (d < 3 || d % 2 == 0) bad("axis d: " + std::to_string(d) + " is not an odd distance >= 3");
  }
  for (int n : c.n_cnots) {
    if (n < 1) bad("axis n_cnots: values must be >= 1");
  }
  for (int n : c.n_inter) {
    if (n < 1) bad("axis n_inter: values must be >= 1");
  }
  for (int n : c.defects) {
    if (n < 0) bad("axis defects: values must be >= 0");
  }
  for (const auto& p : c.policy) parse_routing_policy(p);
  const std::vector<std::optional<double>> alphas = c.alpha.empty()
      ? std::vector<std::optional<double>>{std::nullopt}
      : std::vector<std::optional<double>>(c.alpha.begin(), c.alpha.end());
  const std::vector<std::optional<double>> betas = c.beta.empty()
      ? std::vector<std::optional<double>>{std::nullopt}
      : std::vector<std::optional<double>>(c.beta.begin(), c.beta.end());

  std::vector<SweepPoint> points;
  for (int d : c.d) {
    for (int nc : c.n_cnots) {
      for (int ni : c.n_inter) {
        for (int df : c.defects) {
          for (const auto& pol : c.policy) {
            for (const auto& a : alphas) {
              for (const auto& b : betas) {
                SweepPoint pt{d, nc, ni, df, pol, a, b};
                RoutingConfig rc = RoutingConfig::for_policy(parse_routing_policy(pol));
                if (a) rc.alpha = *a;
                if (b) rc.beta = *b;
                try {
                  rc.validate();
                } catch (const CompileError& e) {
                  bad("invalid combination policy=" + pol + ": " + e.what());
                }
                points.push_back(std::move(pt));
              }
            }
          }
        }
      }
    }
  }
  return points;
}

std::string SweepTable::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

SweepTable run_sweep(const SweepConfig& config) {
  const std::vector<SweepPoint> points = expand(config);
  SweepTable table;
  table.header = {"index", "kind", "d", "n_cnots", "n_inter", "defects", "policy", "alpha", "beta", "status", "error"};
  for (const auto& c : csv_columns(config.wall_time)) table.header.push_back(c);
  table.rows.resize(points.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) table.rows[i] = run_point(config, points[i], i);
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.workers), points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return table;
}

}  // namespace chipmap
