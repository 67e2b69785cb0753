#include "oracles.hpp"
#include "test_util.hpp"

#include <chipmap/benchgen.hpp>
#include <chipmap/pipeline.hpp>

#include <random>

using namespace chipmap;
using testutil::grid_spec;
using testutil::linked_spec;

TEST(Pipeline, PredefinedLsCnotEndToEnd) {
  const auto c = gen_ls_cnot_circuit(3, 2, 1);
  const auto be = ChipletBackend::build(gen_backend_for(c, {}));
  const auto res = compile(c, be);
  EXPECT_EQ(res.registry.stage(), Stage::QSigmaAlphaPhi);
  EXPECT_EQ(res.placements.size(), 6u);
  EXPECT_EQ(res.order.components.size(), 2u);
  EXPECT_EQ(oracle::token_replay(c.dag(), res.compiled, be, true), "");
  ASSERT_EQ(res.stats.wall_time.size(), 6u);
  EXPECT_EQ(res.stats.wall_time.front().first, "partition");
  EXPECT_EQ(res.stats.wall_time.back().first, "metrics");
  // Patches keep their shape.
  for (const auto& p : res.registry.partitions()) {
    for (QubitId q : p.qubits) {
      const auto phys = p.phi->at(q);
      EXPECT_EQ(phys.x - p.placement->rect.x, p.locals.at(q).col);
      EXPECT_EQ(phys.y - p.placement->rect.y, p.locals.at(q).row);
    }
  }
}

TEST(Pipeline, AutoPartitioningOnPlainCircuit) {
  std::mt19937_64 rng(2);
  const auto g = oracle::random_connected_graph(rng, 24, 0.05, 1);
  CircuitInput c;
  c.n_qubits = 24;
  for (const auto& e : g.edges()) c.gates.push_back(testutil::cx(e.a, e.b));
  const auto be = ChipletBackend::build(linked_spec(2, 2, 6, 6, 3));
  const auto res = compile(c, be);
  EXPECT_GE(res.registry.size(), 1u);
  EXPECT_EQ(oracle::token_replay(c.dag(), res.compiled, be, true), "");
  EXPECT_EQ(res.stats.n_qubits, 24);
}

TEST(Pipeline, AutoIgnoresDeclaredPartitions) {
  const auto c = gen_ls_cnot_circuit(3, 1, 1);
  BackendGenOptions wide;
  wide.grid = std::pair{2, 4};
  const auto be = ChipletBackend::build(gen_backend_for(c, wide));
  CompileOptions opts;
  opts.partitions = PartitionSource::Auto;
  const auto res = compile(c, be, opts);
  EXPECT_EQ(res.registry.size(), 6u);
  EXPECT_EQ(oracle::token_replay(c.dag(), res.compiled, be, true), "");
}

TEST(Pipeline, NodeBudgetFallsBackToChipletBlocks) {
  CircuitInput c;
  c.n_qubits = 30;
  for (int q = 0; q + 1 < 30; ++q) c.gates.push_back(testutil::cx(q, q + 1));
  const auto be = ChipletBackend::build(linked_spec(2, 2, 5, 5, 2));
  CompileOptions opts;
  opts.gn_node_budget = 10;
  const auto res = compile(c, be, opts);
  EXPECT_EQ(res.registry.size(), 2u);
  EXPECT_FALSE(res.warnings.empty());
}

TEST(Pipeline, ErrorsNameTheirStage) {
  const auto c = gen_ls_cnot_circuit(3, 1, 1);
  try {
    compile(c, ChipletBackend::build(grid_spec(1, 1, 6, 6)));
    FAIL() << "expected NoFit";
  } catch (const CompileError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoFit);
    EXPECT_EQ(e.stage(), "gmap");
  }
  CompileOptions strict;
  strict.routing.strict_patches = true;
  CircuitInput spread;
  spread.n_qubits = 4;
  spread.partitions = std::map<QubitId, PartitionId>{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  spread.gates = {testutil::cx(0, 3)};
  try {
    compile(spread, ChipletBackend::build(grid_spec(1, 1, 4, 4)), strict);
    FAIL() << "expected a strict patch violation";
  } catch (const CompileError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StrictPatchViolation);
    EXPECT_EQ(e.stage(), "route");
  }
  CompileOptions bad;
  bad.routing.alpha = 3.0;
  EXPECT_COMPILE_ERROR(compile(spread, ChipletBackend::build(grid_spec(1, 1, 4, 4)), bad), ErrorKind::Validation);
  EXPECT_COMPILE_ERROR(parse_partition_source("manual"), ErrorKind::Validation);
}

TEST(Pipeline, DeterministicAcrossRuns) {
  const auto c = gen_ls_cnot_circuit(5, 2, 1);
  const auto be = ChipletBackend::build(gen_backend_for(c, {}));
  CompileOptions opts;
  opts.routing = RoutingConfig::for_policy(RoutingPolicy::Tradeoff);
  const auto a = compile(c, be, opts);
  const auto b = compile(c, be, opts);
  EXPECT_EQ(a.placements, b.placements);
  EXPECT_EQ(a.compiled.link_usage, b.compiled.link_usage);
  ASSERT_EQ(a.compiled.dag.size(), b.compiled.dag.size());
  for (std::size_t i = 0; i < a.compiled.dag.size(); ++i)
    EXPECT_EQ(a.compiled.dag.nodes()[i].qubits, b.compiled.dag.nodes()[i].qubits);
}

TEST(Pipeline, DefectsAreAvoided) {
  const auto c = gen_ls_cnot_circuit(3, 1, 1);
  auto spec = gen_backend_for(c, {});
  spec.defects = {PhysCoord{0, 0, 0}, PhysCoord{1, 2, 2}};
  const auto be = ChipletBackend::build(spec);
  const auto res = compile(c, be);
  for (int p : res.compiled.initial_layout) EXPECT_FALSE(be.is_defective(p));
  for (const auto& g : res.compiled.dag.nodes())
    for (int q : g.qubits) EXPECT_FALSE(be.is_defective(q));
  EXPECT_EQ(oracle::token_replay(c.dag(), res.compiled, be, true), "");
}
