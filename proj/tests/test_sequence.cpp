#include "test_util.hpp"

#include <chipmap/benchgen.hpp>
#include <chipmap/partition.hpp>
#include <chipmap/sequence.hpp>

#include <algorithm>
#include <random>

using namespace chipmap;

namespace {

PartitionGraph graph(std::vector<std::pair<PartitionId, int>> nodes,
                     std::vector<std::tuple<PartitionId, PartitionId, double>> edges) {
  PartitionGraph pg;
  for (auto [id, n] : nodes) pg.add_node(id, n);
  for (auto [a, b, w] : edges) pg.add_weight(a, b, w);
  return pg;
}

}  // namespace

TEST(PartitionGraph, IntraPartitionGatesAddNoEdges) {
  const auto dag = CircuitDag::build({testutil::cx(0, 1), testutil::cx(2, 3)}, 4);
  const auto reg = predefined_partitions(dag, {{0, 0}, {1, 0}, {2, 1}, {3, 1}});
  EXPECT_EQ(build_partition_graph(reg, dag).num_edges(), 0u);
}

TEST(PartitionGraph, SpanningGateAddsWeight) {
  const auto dag = CircuitDag::build({testutil::cx(0, 2)}, 3);
  const auto reg = predefined_partitions(dag, {{0, 0}, {1, 0}, {2, 1}});
  const auto pg = build_partition_graph(reg, dag);
  EXPECT_EQ(pg.weight(0, 1), 1.0);
  EXPECT_EQ(pg.weight(1, 0), 1.0);
}

TEST(PartitionGraph, LsCnotIsAPath) {
  const auto c = gen_ls_cnot_circuit(3, 1, 1);
  const auto dag = c.dag();
  const auto pg = build_partition_graph(predefined_partitions(dag, *c.partitions, c.geometry), dag);
  EXPECT_EQ(pg.weight(0, 1), 3.0);
  EXPECT_EQ(pg.weight(1, 2), 3.0);
  EXPECT_EQ(pg.weight(0, 2), 0.0);
}

TEST(Sequence, ChainFromTheHeaviestEnd) {
  const auto order = sequence(graph({{0, 1}, {1, 1}, {2, 1}}, {{0, 1, 2.0}, {1, 2, 1.0}}));
  ASSERT_EQ(order.components.size(), 1u);
  // Node 1 has the largest weighted degree (3), then its neighbours by weight.
  EXPECT_EQ(order.components[0], (std::vector<PartitionId>{1, 0, 2}));
}

TEST(Sequence, HeavierNeighbourFirst) {
  const auto order = sequence(graph({{0, 1}, {1, 1}, {2, 1}}, {{0, 1, 3.0}, {1, 2, 1.0}}));
  EXPECT_EQ(order.flattened(), (std::vector<PartitionId>{1, 0, 2}));
  const auto chain = sequence(graph({{10, 1}, {11, 1}, {12, 1}}, {{10, 11, 5.0}, {11, 12, 5.0}}));
  EXPECT_EQ(chain.flattened(), (std::vector<PartitionId>{11, 10, 12}));
}

TEST(Sequence, DisjointPairsAreComponents) {
  const auto order = sequence(graph({{0, 4}, {1, 4}, {2, 9}, {3, 9}}, {{0, 1, 1.0}, {2, 3, 1.0}}));
  ASSERT_EQ(order.components.size(), 2u);
  EXPECT_EQ(order.components[0], (std::vector<PartitionId>{2, 3}));
  EXPECT_EQ(order.components[1], (std::vector<PartitionId>{0, 1}));
  EXPECT_EQ(order.sigma.at(2), 0);
  EXPECT_EQ(order.sigma.at(1), 3);
}

TEST(Sequence, StarRootsAtCentreThenLeavesById) {
  const auto order = sequence(graph({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {7, 1}},
                                    {{7, 3, 1.0}, {7, 0, 1.0}, {7, 2, 1.0}, {7, 1, 1.0}}));
  EXPECT_EQ(order.flattened(), (std::vector<PartitionId>{7, 0, 1, 2, 3}));
}

TEST(Sequence, Properties) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    PartitionGraph pg, unit;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const int size = 1 + static_cast<int>(rng() % 5);
      pg.add_node(i, size);
      unit.add_node(i, size);
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng() % 5 == 0) {
          pg.add_weight(a, b, 1.0 + static_cast<double>(rng() % 4));
          unit.add_weight(a, b, 1.0);
        }
      }
    }
    const auto order = sequence(pg);
    auto flat = order.flattened();
    std::sort(flat.begin(), flat.end());
    ASSERT_EQ(flat.size(), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) EXPECT_EQ(flat[static_cast<std::size_t>(i)], i);
    for (const auto& comp : order.components) {
      double best = -1.0;
      PartitionId best_id = -1;
      auto ids = comp;
      std::sort(ids.begin(), ids.end());
      for (PartitionId id : ids) {
        if (pg.weighted_degree(id) > best) {
          best = pg.weighted_degree(id);
          best_id = id;
        }
      }
      EXPECT_EQ(comp.front(), best_id);
    }
    // Component membership ignores weights.
    auto members = [](const SequencedOrder& o) {
      std::vector<std::vector<PartitionId>> out;
      for (auto c : o.components) {
        std::sort(c.begin(), c.end());
        out.push_back(c);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    EXPECT_EQ(members(order), members(sequence(unit)));
  }
}
