#pragma once

#include "chipmap/ir.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace chipmap {

struct CommunityEstimate {
  int k = 0;
  std::vector<int> target_sizes;               // one per community, same order
  std::vector<std::vector<int>> communities;   // sorted by smallest member
  double modularity = 0.0;
};

/// Girvan-Newman edge-betweenness removal (unweighted betweenness, ties
/// broken towards the lexicographically smallest edge). Every split level
/// is scored by weighted modularity against the input graph and the best
/// one wins; ties go to fewer communities. Graphs above `node_budget`
/// nodes are rejected with CompileError(Infeasible).
CommunityEstimate estimate_partition_count(const InteractionGraph& g, std::size_t node_budget = 512);

/// Weighted modularity of `communities` on `g`. Zero for edgeless graphs.
double modularity(const InteractionGraph& g, const std::vector<std::vector<int>>& communities);

struct KwayOptions {
  double imbalance = 0.03;
  int restarts = 8;  // greedy-growth seeds per bisection
};

struct KwayResult {
  std::vector<int> block_of;  // node -> block index in [0,k)
  double cut = 0.0;           // weighted edge cut (lambda-1 on a pairwise graph)
};

/// Capacity-constrained k-way partitioning by recursive bisection. Each
/// bisection grows a block greedily from several seeds and refines it with
/// Fiduccia-Mattheyses passes (single moves, pair swaps when balance is
/// tight). Block i holds at most floor(capacities[i] * (1 + imbalance))
/// nodes and is never empty.
KwayResult kway_partition(const InteractionGraph& g, int k, std::span<const int> capacities,
                          const KwayOptions& options = {});

double cut_weight(const InteractionGraph& g, std::span<const int> block_of);

/// Registry@Q from block labels; boxes inferred with squarest_box.
PartitionRegistry registry_from_blocks(std::span<const int> block_of, int n_qubits);

/// Registry@Q mirroring a qubit -> partition map, with optional declared
/// geometry per partition.
PartitionRegistry predefined_partitions(const CircuitDag& dag, const std::map<QubitId, PartitionId>& qubit_to_pid,
                                        const std::map<PartitionId, PartitionGeometry>& geometry = {});

}  // namespace chipmap
