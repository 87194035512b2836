#include <benchmark/benchmark.h>

#include "subfbm/kernel.hpp"
#include "subfbm/kernel_matrix.hpp"

namespace {

const subfbm::KernelSpec& spec075() {
  static const subfbm::KernelSpec spec =
      subfbm::calibrate_sub(subfbm::HurstIndex(0.75), subfbm::QuadratureConfig{});
  return spec;
}

void BM_BuildFloorMatrix(benchmark::State& state) {
  const auto& spec = spec075();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto matrix = subfbm::build_matrix_floor(n, spec);
    benchmark::DoNotOptimize(matrix.weights.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_BuildFloorMatrix)->Arg(16)->Arg(32)->Arg(64)->Complexity();

void BM_ExactTimeRow(benchmark::State& state) {
  const auto& spec = spec075();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto row = subfbm::exact_time_row(0.37, n, spec);
    benchmark::DoNotOptimize(row.data());
  }
}
BENCHMARK(BM_ExactTimeRow)->Arg(64)->Arg(256);

void BM_SteppedWeights(benchmark::State& state) {
  const auto& spec = spec075();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto w = subfbm::stepped_weights(16, n, 1.0, spec);
    benchmark::DoNotOptimize(w.block.data());
  }
}
BENCHMARK(BM_SteppedWeights)->Arg(72)->Arg(264);

}  // namespace

BENCHMARK_MAIN();
