#pragma once

#include "chipmap/backend.hpp"
#include "chipmap/ir.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chipmap {

/// Custom accepts any non-negative weights.
enum class RoutingPolicy { Basic, Focus, Tradeoff, Custom };

RoutingPolicy parse_routing_policy(std::string_view s);
const char* to_string(RoutingPolicy p) noexcept;

/// Weights of the link cost: hops + alpha * epsilon + beta * usage.
/// alpha is in hops per unit error probability, beta in hops per prior use.
struct RoutingConfig {
  double alpha = 0.0;
  double beta = 0.0;
  int k_nearest = 3;
  RoutingPolicy policy = RoutingPolicy::Basic;
  bool restore_mapping = true;
  bool strict_patches = false;

  /// Defaults: basic (0, 0), focus (1e4, 0), tradeoff (1e3, 1).
  static RoutingConfig for_policy(RoutingPolicy policy);
  /// Throws CompileError(Validation) when weights contradict the policy.
  void validate() const;
};

double path_cost(std::size_t hops, double epsilon, int usage, const RoutingConfig& cfg) noexcept;
/// Cost of a physical path (edge count = size - 1) through `link`.
double path_cost(std::span<const int> path, const InterChipLink& link, int usage, const RoutingConfig& cfg) noexcept;

struct CompiledCircuit {
  CircuitDag dag;                    // over global physical qubit ids
  std::vector<int> initial_layout;   // virtual -> physical (phi)
  std::vector<int> final_layout;     // virtual -> physical after the last gate
  std::size_t swap_count = 0;
  std::vector<int> link_usage;       // selections per link (U)
  std::vector<int> link_traversals;  // two-qubit nodes emitted across each link
  std::size_t patch_violations = 0;
  std::vector<std::string> warnings;
};

/// SWAP router over a fixed backend. Holds the token placement (which
/// virtual qubit sits on which physical qubit) and the link usage counters
/// of one routing run.
class Router {
 public:
  Router(const ChipletBackend& backend, RoutingConfig cfg);

  /// Places virtual qubit v on physical qubit layout[v].
  void set_layout(std::span<const int> layout, std::span<const PartitionId> partition_of_virtual);

  /// Unweighted shortest path from src to dst, among equal lengths the one
  /// crossing the fewest occupied qubits, then the smallest predecessor id.
  /// `chip` >= 0 restricts the search to that chiplet. Empty when unreachable.
  std::vector<int> shortest_path(int src, int dst, int chip = -1) const;

  struct LinkChoice {
    int link = -1;
    std::vector<int> path;  // src ... a, b ... dst
    double cost = 0.0;
  };

  /// Picks the link for the first chiplet crossing of the shortest src->dst
  /// path among the k links on that boundary nearest to the crossing, by
  /// path cost. Increments the chosen link's usage. Throws NoRoute.
  LinkChoice select_link(int src, int dst);

  /// Complete path with one link selection per boundary crossing. Usage
  /// counters are incremented for every link on the returned path.
  std::vector<int> find_path(int src, int dst);

  /// Appends the physical ops realizing `gate` to `out`.
  void route_gate(const GateNode& gate, std::vector<GateNode>& out);

  const std::vector<int>& usage() const noexcept { return usage_; }
  const std::vector<int>& traversals() const noexcept { return traversals_; }
  const std::vector<int>& positions() const noexcept { return pos_; }
  int occupant(int phys) const noexcept { return occ_[static_cast<std::size_t>(phys)]; }
  std::size_t swap_count() const noexcept { return swaps_; }
  std::size_t patch_violations() const noexcept { return violations_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  const RoutingConfig& config() const noexcept { return cfg_; }

 private:
  struct Search;
  void search(int src, int chip, int stop_at, Search& s) const;
  std::vector<int> trace(const Search& s, int src, int dst) const;
  LinkChoice choose_crossing(int cur, int dst, int from, int to) const;
  std::vector<int> links_between(ChipId a, ChipId b) const;
  void emit_two(OpKind kind, const std::string& name, int p, int q, const std::string& tag, std::vector<GateNode>& out);
  void apply_swap(int p, int q);
  bool swap_violates(int mover, int target_phys) const;

  const ChipletBackend* backend_;
  RoutingConfig cfg_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> usage_;
  std::vector<int> traversals_;
  std::vector<int> pos_;
  std::vector<int> occ_;
  std::vector<PartitionId> part_;
  std::size_t swaps_ = 0;
  std::size_t violations_ = 0;
  std::vector<std::string> warnings_;
};

/// Routes every gate of `dag` in program order on the mapping phi of a
/// fully enriched registry.
CompiledCircuit route_circuit(const CircuitDag& dag, const PartitionRegistry& registry,
                              const ChipletBackend& backend, const RoutingConfig& cfg);

}  // namespace chipmap
