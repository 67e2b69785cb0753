#include "test_util.hpp"

#include <chipmap/benchgen.hpp>
#include <chipmap/partition.hpp>
#include <chipmap/sequence.hpp>

#include <set>

using namespace chipmap;

namespace {

// Every two-qubit gate inside one partition acts on local neighbours.
void expect_local_nearest_neighbour(const CircuitInput& c) {
  for (const auto& g : c.gates) {
    if (!is_two_qubit(g.kind)) continue;
    const PartitionId pa = c.partitions->at(g.qubits[0]);
    const PartitionId pb = c.partitions->at(g.qubits[1]);
    if (pa != pb) continue;
    const auto& locals = c.geometry.at(pa).locals;
    const auto a = locals.at(g.qubits[0]);
    const auto b = locals.at(g.qubits[1]);
    EXPECT_EQ(std::abs(a.row - b.row) + std::abs(a.col - b.col), 1);
  }
}

void expect_geometry_covers(const CircuitInput& c) {
  ASSERT_TRUE(c.partitions.has_value());
  EXPECT_EQ(c.partitions->size(), static_cast<std::size_t>(c.n_qubits));
  std::map<PartitionId, std::set<LocalPos>> cells;
  for (const auto& [q, pid] : *c.partitions) {
    const auto& geo = c.geometry.at(pid);
    const auto pos = geo.locals.at(q);
    EXPECT_GE(pos.row, 0);
    EXPECT_LT(pos.row, geo.height);
    EXPECT_GE(pos.col, 0);
    EXPECT_LT(pos.col, geo.width);
    EXPECT_TRUE(cells[pid].insert(pos).second);
  }
}

}  // namespace

TEST(MemoryCircuit, DistanceThreePatch) {
  const auto c = gen_memory_circuit(3, 1);
  EXPECT_EQ(c.n_qubits, 25);
  ASSERT_EQ(c.geometry.size(), 1u);
  EXPECT_EQ(c.geometry.at(0).width, 5);
  EXPECT_EQ(c.geometry.at(0).height, 5);
  expect_geometry_covers(c);
  expect_local_nearest_neighbour(c);
  EXPECT_NO_THROW(c.dag());
}

TEST(MemoryCircuit, QubitCountScalesWithBoxArea) {
  EXPECT_DOUBLE_EQ(static_cast<double>(gen_memory_circuit(5, 1).n_qubits) / gen_memory_circuit(3, 1).n_qubits,
                   81.0 / 25.0);
  for (int d = 3; d <= 11; d += 2) EXPECT_EQ(gen_memory_circuit(d, 1).n_qubits, patch_side(d) * patch_side(d));
}

TEST(MemoryCircuit, AncillasTouchAtMostFourData) {
  const auto c = gen_memory_circuit(5, 1);
  std::map<QubitId, std::set<QubitId>> partners;
  for (const auto& g : c.gates) {
    if (g.kind != OpKind::CX) continue;
    partners[g.qubits[0]].insert(g.qubits[1]);
    partners[g.qubits[1]].insert(g.qubits[0]);
  }
  for (const auto& [q, ps] : partners) EXPECT_LE(ps.size(), 4u);
}

TEST(MemoryCircuit, RoundsRepeatBetweenBarriers) {
  const auto one = gen_memory_circuit(3, 1);
  const auto two = gen_memory_circuit(3, 2);
  auto barriers = [](const CircuitInput& c) {
    return std::count_if(c.gates.begin(), c.gates.end(), [](const GateNode& g) { return g.kind == OpKind::Barrier; });
  };
  EXPECT_EQ(barriers(one), 1);
  EXPECT_EQ(barriers(two), 2);
  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < two.gates.size(); ++i)
    if (two.gates[i].kind == OpKind::Barrier) cuts.push_back(i);
  ASSERT_EQ(cuts.size(), 2u);
  const std::size_t len = cuts[1] - cuts[0];
  for (std::size_t i = 1; i < len; ++i) {
    EXPECT_EQ(two.gates[cuts[0] + i].kind, two.gates[cuts[0] + i - len].kind);
    EXPECT_EQ(two.gates[cuts[0] + i].qubits, two.gates[cuts[0] + i - len].qubits);
  }
  EXPECT_EQ(two.gates.size(), one.gates.size() + len);
}

TEST(MemoryCircuit, InvalidParameters) {
  EXPECT_COMPILE_ERROR(gen_memory_circuit(4, 1), ErrorKind::Validation);
  EXPECT_COMPILE_ERROR(gen_memory_circuit(1, 1), ErrorKind::Validation);
  EXPECT_COMPILE_ERROR(gen_memory_circuit(3, 0), ErrorKind::Validation);
  EXPECT_COMPILE_ERROR(gen_ls_cnot_circuit(3, 0, 1), ErrorKind::Validation);
}

TEST(LsCnot, SpanningGatesOnlyAlongTheChain) {
  const auto c = gen_ls_cnot_circuit(3, 1, 1);
  expect_geometry_covers(c);
  expect_local_nearest_neighbour(c);
  std::set<std::pair<PartitionId, PartitionId>> pairs;
  for (const auto& g : c.gates) {
    if (!is_two_qubit(g.kind)) continue;
    PartitionId a = c.partitions->at(g.qubits[0]);
    PartitionId b = c.partitions->at(g.qubits[1]);
    if (a == b) continue;
    pairs.insert({std::min(a, b), std::max(a, b)});
  }
  EXPECT_EQ(pairs, (std::set<std::pair<PartitionId, PartitionId>>{{0, 1}, {1, 2}}));
  EXPECT_EQ(c.hints.at(1).dir, Direction::Below);
  EXPECT_EQ(c.hints.at(1).ref, 0);
  EXPECT_EQ(c.hints.at(2).ref, 1);
}

TEST(LsCnot, MergesHaveDistancePairs) {
  for (int d : {3, 5, 7}) {
    const auto c = gen_ls_cnot_circuit(d, 1, 1);
    long merge = 0;
    for (const auto& g : c.gates)
      if (is_two_qubit(g.kind) && c.partitions->at(g.qubits[0]) != c.partitions->at(g.qubits[1])) ++merge;
    EXPECT_EQ(merge, 2 * d);
  }
}

TEST(LsCnot, BlocksAreDisjointPaths) {
  const auto c = gen_ls_cnot_circuit(3, 2, 1);
  const auto dag = c.dag();
  const auto reg = predefined_partitions(dag, *c.partitions, c.geometry);
  EXPECT_EQ(reg.size(), 6u);
  const auto pg = build_partition_graph(reg, dag);
  EXPECT_EQ(pg.num_edges(), 4u);
  EXPECT_EQ(pg.weight(2, 3), 0.0);
  const auto order = sequence(pg);
  ASSERT_EQ(order.components.size(), 2u);
  EXPECT_EQ(order.components[0].size(), 3u);
  // No gate touches two blocks.
  for (const auto& g : c.gates) {
    std::set<int> blocks;
    for (QubitId q : g.qubits) blocks.insert(c.partitions->at(q) / 3);
    EXPECT_EQ(blocks.size(), 1u);
  }
}

TEST(BackendGen, HeadroomSizing) {
  std::vector<std::string> warnings;
  const auto spec = gen_backend_for(gen_memory_circuit(3, 1), BackendGenOptions{}, &warnings);
  EXPECT_EQ(spec.chip_w, 6);
  EXPECT_EQ(spec.chip_h, 6);
  EXPECT_EQ(spec.grid_rows * spec.grid_cols, 2);
  EXPECT_FALSE(warnings.empty());
  for (const auto& l : spec.links) EXPECT_NE(l.a.chip, l.b.chip);

  const auto big = gen_backend_for(gen_ls_cnot_circuit(3, 8, 1), BackendGenOptions{});
  EXPECT_EQ(big.grid_rows, 4);
  EXPECT_EQ(big.grid_cols, 8);
  BackendGenOptions zero;
  zero.headroom = 0.0;
  EXPECT_EQ(gen_backend_for(gen_memory_circuit(5, 1), zero).chip_w, 9);
  BackendGenOptions column;
  column.grid = std::pair{4, 1};
  const auto col = gen_backend_for(gen_ls_cnot_circuit(3, 1, 1), column);
  EXPECT_EQ(col.grid_rows, 4);
  EXPECT_EQ(col.grid_cols, 1);
  EXPECT_NO_THROW(ChipletBackend::build(col));
}
