#include "oracles.hpp"
#include "test_util.hpp"

#include <chipmap/benchgen.hpp>
#include <chipmap/partition.hpp>

#include <random>
#include <set>

using namespace chipmap;

namespace {

InteractionGraph two_triangles(double bridge = 1.0) {
  InteractionGraph g(6);
  for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}}) g.add_weight(a, b, 1.0);
  g.add_weight(2, 3, bridge);
  return g;
}

}  // namespace

TEST(GirvanNewman, TwoCliquesSplitAtTheBridge) {
  const auto est = estimate_partition_count(two_triangles());
  EXPECT_EQ(est.k, 2);
  EXPECT_EQ(est.target_sizes, (std::vector<int>{3, 3}));
  EXPECT_EQ(est.communities[0], (std::vector<int>{0, 1, 2}));

  // The bridge cut is the best 2-split over all 2^5 labellings.
  const auto g = two_triangles();
  double best = -1.0;
  for (unsigned mask = 1; mask < (1u << 5); ++mask) {
    std::vector<std::vector<int>> comms(2);
    for (int v = 0; v < 6; ++v) comms[(v < 5 && (mask >> v) & 1u) ? 1 : 0].push_back(v);
    best = std::max(best, modularity(g, comms));
  }
  EXPECT_NEAR(est.modularity, best, 1e-12);
}

TEST(GirvanNewman, EdgelessGraphIsAllSingletons) {
  const auto est = estimate_partition_count(InteractionGraph(5));
  EXPECT_EQ(est.k, 5);
  EXPECT_EQ(est.target_sizes, (std::vector<int>(5, 1)));
}

TEST(GirvanNewman, InvariantUnderWeightScaling) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_connected_graph(rng, 12, 0.25, 4);
    const auto a = estimate_partition_count(g);
    const auto b = estimate_partition_count(g.scaled(7.5));
    EXPECT_EQ(a.communities, b.communities);
    EXPECT_NEAR(a.modularity, b.modularity, 1e-9);
  }
}

TEST(GirvanNewman, RespectsNodeBudget) {
  EXPECT_COMPILE_ERROR(estimate_partition_count(InteractionGraph(20), 10), ErrorKind::Infeasible);
}

// Reference values computed with networkx (edge_betweenness_centrality,
// lexicographically smallest edge on ties, weighted modularity).
TEST(GirvanNewman, LsCnotDistanceThreeMatchesReference) {
  const auto circuit = gen_ls_cnot_circuit(3, 1, 1);
  const auto g = interaction_graph(circuit.dag());
  const auto est = estimate_partition_count(g);
  EXPECT_EQ(est.k, 6);
  EXPECT_NEAR(est.modularity, 0.658824640967498, 1e-9);
  EXPECT_EQ(est.target_sizes, (std::vector<int>{10, 15, 10, 15, 10, 15}));
  // Every community stays inside one generated patch.
  for (const auto& comm : est.communities) {
    std::set<PartitionId> owners;
    for (int q : comm) owners.insert(circuit.partitions->at(q));
    EXPECT_EQ(owners.size(), 1u);
  }
}

TEST(Kway, SingleBlock) {
  const auto g = two_triangles();
  const std::vector<int> caps{6};
  const auto r = kway_partition(g, 1, caps);
  EXPECT_EQ(r.cut, 0.0);
  for (int b : r.block_of) EXPECT_EQ(b, 0);
}

TEST(Kway, TwoCliquesCutTheBridge) {
  const auto g = two_triangles(2.5);
  const std::vector<int> caps{3, 3};
  const auto r = kway_partition(g, 2, caps);
  EXPECT_EQ(r.cut, 2.5);
  EXPECT_EQ(r.cut, oracle::exhaustive_bisection(g, 3, 3, 0.03));
}

TEST(Kway, FullyShattered) {
  const auto g = two_triangles();
  const std::vector<int> caps(6, 1);
  const auto r = kway_partition(g, 6, caps);
  EXPECT_EQ(r.cut, g.total_weight());
  std::set<int> blocks(r.block_of.begin(), r.block_of.end());
  EXPECT_EQ(blocks.size(), 6u);
}

TEST(Kway, InfeasibleCapacities) {
  const auto g = two_triangles();
  const std::vector<int> small{2, 2};
  EXPECT_COMPILE_ERROR(kway_partition(g, 2, small), ErrorKind::Infeasible);
  const std::vector<int> wrong{6};
  EXPECT_COMPILE_ERROR(kway_partition(g, 2, wrong), ErrorKind::Validation);
}

TEST(Kway, BlocksRespectBoundsAndCover) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10 + static_cast<int>(rng() % 30);
    const int k = 2 + static_cast<int>(rng() % 4);
    const auto g = oracle::random_connected_graph(rng, n, 0.15, 5);
    std::vector<int> caps(static_cast<std::size_t>(k), (n + k - 1) / k);
    const auto r = kway_partition(g, k, caps);
    ASSERT_EQ(r.block_of.size(), static_cast<std::size_t>(n));
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int b : r.block_of) {
      ASSERT_GE(b, 0);
      ASSERT_LT(b, k);
      ++sizes[static_cast<std::size_t>(b)];
    }
    for (int i = 0; i < k; ++i) {
      EXPECT_GE(sizes[static_cast<std::size_t>(i)], 1);
      EXPECT_LE(sizes[static_cast<std::size_t>(i)], static_cast<int>(caps[static_cast<std::size_t>(i)] * 1.03 + 1e-9));
    }
    EXPECT_DOUBLE_EQ(r.cut, cut_weight(g, r.block_of));
  }
}

TEST(Kway, NoSingleMoveImprovesTheCut) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 8 + static_cast<int>(rng() % 12);
    const auto g = oracle::random_connected_graph(rng, n, 0.3, 5);
    const std::vector<int> caps{n / 2 + 2, n - n / 2 + 2};
    const auto r = kway_partition(g, 2, caps);
    std::vector<int> sizes(2, 0);
    for (int b : r.block_of) ++sizes[static_cast<std::size_t>(b)];
    for (int v = 0; v < n; ++v) {
      auto moved = r.block_of;
      const int from = moved[static_cast<std::size_t>(v)];
      const int to = 1 - from;
      if (sizes[static_cast<std::size_t>(from)] == 1) continue;
      if (sizes[static_cast<std::size_t>(to)] + 1 > static_cast<int>(caps[static_cast<std::size_t>(to)] * 1.03 + 1e-9)) continue;
      moved[static_cast<std::size_t>(v)] = to;
      EXPECT_GE(cut_weight(g, moved) + 1e-9, r.cut) << "trial " << trial << " node " << v;
    }
  }
}

TEST(Predefined, MirrorsTheMap) {
  const auto dag = CircuitDag::build({testutil::cx(0, 1), testutil::cx(1, 2)}, 3);
  const auto reg = predefined_partitions(dag, {{0, 7}, {1, 7}, {2, 9}});
  ASSERT_EQ(reg.size(), 2u);
  EXPECT_EQ(reg.at(7).qubits, (std::vector<QubitId>{0, 1}));
  EXPECT_EQ(reg.at(9).qubits, (std::vector<QubitId>{2}));
}

TEST(Predefined, InfersSquarestBox) {
  std::map<QubitId, PartitionId> map;
  for (int q = 0; q < 9; ++q) map[q] = 0;
  const auto reg = predefined_partitions(CircuitDag::build({}, 9), map);
  EXPECT_EQ(reg.at(0).width, 3);
  EXPECT_EQ(reg.at(0).height, 3);
  EXPECT_EQ(reg.at(0).locals.at(4), (LocalPos{1, 1}));
}

TEST(Predefined, KeepsDeclaredGeometry) {
  // 25 data + 24 ancilla qubits declared on a 7x7 grid.
  std::map<QubitId, PartitionId> map;
  PartitionGeometry geo{7, 7, {}};
  for (int q = 0; q < 49; ++q) {
    map[q] = 3;
    geo.locals[q] = LocalPos{6 - q / 7, q % 7};
  }
  const auto reg = predefined_partitions(CircuitDag::build({}, 49), map, {{3, geo}});
  EXPECT_EQ(reg.at(3).width, 7);
  EXPECT_EQ(reg.at(3).height, 7);
  EXPECT_EQ(reg.at(3).locals, geo.locals);
}

TEST(Predefined, Errors) {
  const auto dag = CircuitDag::build({}, 3);
  EXPECT_COMPILE_ERROR(predefined_partitions(dag, {{0, 0}, {1, 0}}), ErrorKind::Validation);
  EXPECT_COMPILE_ERROR(predefined_partitions(dag, {{0, 0}, {1, 0}, {2, 0}, {5, 0}}), ErrorKind::Validation);
  PartitionGeometry dup{2, 2, {{0, LocalPos{0, 0}}, {1, LocalPos{0, 0}}}};
  EXPECT_COMPILE_ERROR(predefined_partitions(dag, {{0, 0}, {1, 0}, {2, 0}}, {{0, dup}}), ErrorKind::Validation);
  EXPECT_COMPILE_ERROR(predefined_partitions(dag, {{0, 0}, {1, 0}, {2, 0}}, {{4, PartitionGeometry{2, 2, {}}}}),
                       ErrorKind::Validation);
}

TEST(RegistryFromBlocks, OnePartitionPerBlock) {
  const std::vector<int> blocks{1, 0, 1, 1};
  const auto reg = registry_from_blocks(blocks, 4);
  ASSERT_EQ(reg.size(), 2u);
  EXPECT_EQ(reg.at(1).qubits, (std::vector<QubitId>{0, 2, 3}));
  EXPECT_EQ(reg.at(1).width * reg.at(1).height, 4);
}
