#include <chipmap/gmap.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace chipmap;

namespace {

void BM_PackRandomRects(benchmark::State& state) {
  BackendSpec spec;
  spec.grid_rows = 4;
  spec.grid_cols = 4;
  spec.chip_w = spec.chip_h = 24;
  const auto be = ChipletBackend::build(spec);
  const auto n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::mt19937 rng(1);
    auto bins = BinState::init(be);
    for (int id = 0; id < n; ++id) {
      const int w = 2 + static_cast<int>(rng() % 8);
      const int h = 2 + static_cast<int>(rng() % 8);
      try {
        place_partition(bins, id, w, h, id % 2 ? PlacementMode::Center : PlacementMode::SizeAware);
      } catch (const std::exception&) {
        break;
      }
    }
    benchmark::DoNotOptimize(bins.free_area(0));
  }
}
BENCHMARK(BM_PackRandomRects)->Arg(16)->Arg(64)->Arg(128);

}  // namespace
