#include <benchmark/benchmark.h>

#include <vector>

#include "subfbm/kernel.hpp"
#include "subfbm/kernel_matrix.hpp"
#include "subfbm/noise.hpp"
#include "subfbm/simulate.hpp"

namespace {

const subfbm::KernelSpec& spec075() {
  static const subfbm::KernelSpec spec =
      subfbm::calibrate_sub(subfbm::HurstIndex(0.75), subfbm::QuadratureConfig{});
  return spec;
}

const subfbm::KernelMatrix& matrix(int n) {
  static const subfbm::KernelMatrix m64 = subfbm::build_matrix_floor(64, spec075());
  static const subfbm::KernelMatrix m256 =
      subfbm::build_matrix_floor(256, spec075());
  return n == 64 ? m64 : m256;
}

void BM_NoiseFill(benchmark::State& state) {
  std::vector<double> buf(static_cast<std::size_t>(state.range(0)));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    subfbm::NoiseStream noise(2026, ++stream,
                              subfbm::Distribution::StandardGaussian);
    noise.fill(buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NoiseFill)->Arg(1024)->Arg(65536);

void BM_DonskerEnsemble(benchmark::State& state) {
  subfbm::EnsembleConfig cfg;
  cfg.M = static_cast<int>(state.range(0));
  cfg.master_seed = 2026;
  for (auto _ : state) {
    const auto ens = subfbm::run_donsker_ensemble(256, cfg);
    benchmark::DoNotOptimize(ens.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DonskerEnsemble)->Arg(1000);

void BM_KernelEnsemble(benchmark::State& state) {
  const auto& mat = matrix(static_cast<int>(state.range(0)));
  subfbm::EnsembleConfig cfg;
  cfg.M = static_cast<int>(state.range(1));
  cfg.master_seed = 2026;
  cfg.distribution = subfbm::Distribution::StandardGaussian;
  for (auto _ : state) {
    const auto ens = subfbm::run_ensemble(mat, cfg);
    benchmark::DoNotOptimize(ens.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_KernelEnsemble)->Args({64, 1000})->Args({256, 1000});

}  // namespace

BENCHMARK_MAIN();
