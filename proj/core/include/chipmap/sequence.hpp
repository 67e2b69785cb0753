#pragma once

#include "chipmap/ir.hpp"

#include <map>
#include <vector>

namespace chipmap {

/// Partitions as nodes, weighted by the number of two-qubit gates spanning
/// each pair. Node weights carry the partition's qubit count.
class PartitionGraph {
 public:
  void add_node(PartitionId id, int qubit_count);
  void add_weight(PartitionId a, PartitionId b, double w);

  const std::map<PartitionId, int>& nodes() const noexcept { return nodes_; }
  double weight(PartitionId a, PartitionId b) const;
  double weighted_degree(PartitionId id) const;
  /// Neighbours by descending weight, ties by ascending id.
  std::vector<std::pair<PartitionId, double>> neighbors(PartitionId id) const;
  std::size_t num_edges() const noexcept { return weights_.size(); }
  const std::map<std::pair<PartitionId, PartitionId>, double>& edges() const noexcept { return weights_; }

 private:
  std::map<PartitionId, int> nodes_;
  std::map<std::pair<PartitionId, PartitionId>, double> weights_;
  std::map<PartitionId, std::map<PartitionId, double>> adj_;
};

PartitionGraph build_partition_graph(const PartitionRegistry& registry, const CircuitDag& dag);

struct SequencedOrder {
  std::vector<std::vector<PartitionId>> components;
  std::map<PartitionId, int> sigma;

  std::vector<PartitionId> flattened() const;
};

/// BFS placement order. Each connected component is rooted at its largest
/// weighted degree (ties: smallest id) and expands neighbours by descending
/// weight then ascending id. Components are ordered by descending total
/// qubit count, ties by smallest member id.
SequencedOrder sequence(const PartitionGraph& pg);

}  // namespace chipmap
