#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/gmap.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chipmap {

/// Cartesian sweep over generated benchmarks. Every axis holds at least one
/// value; alpha and beta are optional overrides of the policy defaults.
struct SweepConfig {
  std::string kind = "ls-cnot";  // or "memory"
  int rounds = 1;
  double headroom = 0.30;
  std::optional<std::pair<int, int>> grid;
  EpsilonSpec eps;
  PlacementMode placement = PlacementMode::Center;
  std::uint64_t seed = 0;
  int workers = 1;
  bool wall_time = false;  // adds per-stage timings (breaks byte-identical output)

  std::vector<int> d{3};
  std::vector<int> n_cnots{1};
  std::vector<int> n_inter{8};
  std::vector<int> defects{0};
  std::vector<std::string> policy{"basic"};
  std::vector<double> alpha;
  std::vector<double> beta;
};

/// Reads {kind, rounds, headroom, grid, eps, placement, seed, workers,
/// wall_time, axes: {d, n_cnots, n_inter, defects, policy, alpha, beta}}.
/// Unknown axes or keys throw CompileError(Validation).
SweepConfig sweep_config_from_json(const nlohmann::json& j);

struct SweepPoint {
  int d = 3;
  int n_cnots = 1;
  int n_inter = 8;
  int defects = 0;
  std::string policy = "basic";
  std::optional<double> alpha;
  std::optional<double> beta;
};

/// Configurations in deterministic order (last axis varies fastest).
/// Throws CompileError(Validation) for invalid axis values.
std::vector<SweepPoint> expand(const SweepConfig& config);

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Runs every configuration on a pool of config.workers threads. Rows come
/// back in configuration order; failed configurations carry their error.
SweepTable run_sweep(const SweepConfig& config);

}  // namespace chipmap
