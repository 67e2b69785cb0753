#include "chipmap/sequence.hpp"

#include "chipmap/error.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace chipmap {

void PartitionGraph::add_node(PartitionId id, int qubit_count) {
  nodes_[id] = qubit_count;
  adj_[id];
}

void PartitionGraph::add_weight(PartitionId a, PartitionId b, double w) {
  if (a == b) return;
  if (!nodes_.count(a) || !nodes_.count(b)) fail(ErrorKind::Validation, "sequence", "edge between unknown partitions");
  if (a > b) std::swap(a, b);
  weights_[{a, b}] += w;
  adj_[a][b] += w;
  adj_[b][a] += w;
}

double PartitionGraph::weight(PartitionId a, PartitionId b) const {
  if (a > b) std::swap(a, b);
  auto it = weights_.find({a, b});
  return it == weights_.end() ? 0.0 : it->second;
}

double PartitionGraph::weighted_degree(PartitionId id) const {
  double sum = 0.0;
  auto it = adj_.find(id);
  if (it == adj_.end()) return 0.0;
  for (const auto& [_, w] : it->second) sum += w;
  return sum;
}

std::vector<std::pair<PartitionId, double>> PartitionGraph::neighbors(PartitionId id) const {
  std::vector<std::pair<PartitionId, double>> out;
  auto it = adj_.find(id);
  if (it == adj_.end()) return out;
  out.assign(it->second.begin(), it->second.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

PartitionGraph build_partition_graph(const PartitionRegistry& registry, const CircuitDag& dag) {
  PartitionGraph pg;
  for (const Partition& p : registry.partitions()) pg.add_node(p.id, static_cast<int>(p.qubits.size()));
  for (const GateNode& g : dag.nodes()) {
    if (!is_two_qubit(g.kind)) continue;
    const PartitionId a = registry.partition_of(g.qubits[0]);
    const PartitionId b = registry.partition_of(g.qubits[1]);
    if (a != b) pg.add_weight(a, b, 1.0);
  }
  return pg;
}

std::vector<PartitionId> SequencedOrder::flattened() const {
  std::vector<PartitionId> out;
  for (const auto& c : components) out.insert(out.end(), c.begin(), c.end());
  return out;
}

SequencedOrder sequence(const PartitionGraph& pg) {
  // Reachability groups first.
  std::set<PartitionId> seen;
  std::vector<std::vector<PartitionId>> groups;
  for (const auto& [id, _] : pg.nodes()) {
    if (seen.count(id)) continue;
    std::vector<PartitionId> group{id};
    seen.insert(id);
    for (std::size_t head = 0; head < group.size(); ++head) {
      for (const auto& [n, w] : pg.neighbors(group[head])) {
        if (seen.insert(n).second) group.push_back(n);
      }
    }
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
  }

  auto qubits_of = [&](const std::vector<PartitionId>& group) {
    long total = 0;
    for (PartitionId id : group) total += pg.nodes().at(id);
    return total;
  };
  std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
    const long qa = qubits_of(a);
    const long qb = qubits_of(b);
    if (qa != qb) return qa > qb;
    return a.front() < b.front();
  });

  SequencedOrder order;
  int sigma = 0;
  for (const auto& group : groups) {
    PartitionId root = group.front();
    double best = pg.weighted_degree(root);
    for (PartitionId id : group) {
      const double d = pg.weighted_degree(id);
      if (d > best + 1e-12) {
        best = d;
        root = id;
      }
    }
    std::vector<PartitionId> bfs{root};
    std::set<PartitionId> visited{root};
    for (std::size_t head = 0; head < bfs.size(); ++head) {
      for (const auto& [n, w] : pg.neighbors(bfs[head])) {
        if (visited.insert(n).second) bfs.push_back(n);
      }
    }
    for (PartitionId id : bfs) order.sigma[id] = sigma++;
    order.components.push_back(std::move(bfs));
  }
  return order;
}

}  // namespace chipmap
