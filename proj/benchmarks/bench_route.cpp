#include <chipmap/benchgen.hpp>
#include <chipmap/route.hpp>

#include <benchmark/benchmark.h>

using namespace chipmap;

namespace {

ChipletBackend grid_backend(int side, int per_edge) {
  BackendSpec spec;
  spec.grid_rows = 2;
  spec.grid_cols = 2;
  spec.chip_w = spec.chip_h = side;
  spec.links = generate_links(2, 2, side, side, per_edge, EpsilonSpec{});
  return ChipletBackend::build(spec);
}

void BM_FindPathAcrossChiplets(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto be = grid_backend(side, 4);
  Router router(be, RoutingConfig::for_policy(RoutingPolicy::Tradeoff));
  const int src = be.global_id({0, 0, 0});
  const int dst = be.global_id({3, side - 1, side - 1});
  for (auto _ : state) benchmark::DoNotOptimize(router.find_path(src, dst));
  state.SetComplexityN(static_cast<long>(be.num_qubits()));
}
BENCHMARK(BM_FindPathAcrossChiplets)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_RouteCrossingGate(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto be = grid_backend(side, 8);
  Router router(be, RoutingConfig{});
  const std::vector<int> layout{be.global_id({0, 0, side / 2}), be.global_id({1, side - 1, side / 2})};
  const std::vector<PartitionId> parts{0, 1};
  router.set_layout(layout, parts);
  const GateNode gate = GateNode::make(OpKind::CX, {0, 1});
  std::vector<GateNode> out;
  for (auto _ : state) {
    out.clear();
    router.route_gate(gate, out);
  }
}
BENCHMARK(BM_RouteCrossingGate)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
