#include <chipmap/benchgen.hpp>
#include <chipmap/pipeline.hpp>

#include <benchmark/benchmark.h>

using namespace chipmap;

namespace {

void BM_CompileLsCnot(benchmark::State& state) {
  const auto c = gen_ls_cnot_circuit(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1);
  const auto be = ChipletBackend::build(gen_backend_for(c, {}));
  for (auto _ : state) benchmark::DoNotOptimize(compile(c, be));
  state.counters["qubits"] = c.n_qubits;
}
BENCHMARK(BM_CompileLsCnot)->Args({3, 1})->Args({5, 4})->Args({7, 8})->Unit(benchmark::kMillisecond);

void BM_CompileMemory(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto c = gen_memory_circuit(d, 1);
  BackendSpec spec;
  spec.chip_w = spec.chip_h = patch_side(d);
  const auto be = ChipletBackend::build(spec);
  for (auto _ : state) benchmark::DoNotOptimize(compile(c, be));
}
BENCHMARK(BM_CompileMemory)->Arg(3)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);

}  // namespace
