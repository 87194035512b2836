#include <benchmark/benchmark.h>

#include <cmath>

#include "subfbm/kernel.hpp"
#include "subfbm/quadrature.hpp"

namespace {

const subfbm::KernelSpec& spec075() {
  static const subfbm::KernelSpec spec =
      subfbm::calibrate_sub(subfbm::HurstIndex(0.75), subfbm::QuadratureConfig{});
  return spec;
}

void BM_AdaptiveSmooth(benchmark::State& state) {
  subfbm::QuadratureConfig cfg;
  for (auto _ : state) {
    auto r = subfbm::integrate_adaptive(
        [](double x) { return std::exp(-x) * std::sin(8.0 * x); }, 0.0, 1.0,
        cfg);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_AdaptiveSmooth);

void BM_LeftPowerSingular(benchmark::State& state) {
  subfbm::QuadratureConfig cfg;
  for (auto _ : state) {
    auto r = subfbm::integrate_left_power(
        [](double x) { return std::pow(x, -0.4) * std::cos(x); }, 1.0, -0.4,
        cfg);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_LeftPowerSingular);

void BM_InnerIntegral(benchmark::State& state) {
  const auto& spec = spec075();
  const double s = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(subfbm::inner_integral(s, 1.0, spec));
  }
}
BENCHMARK(BM_InnerIntegral)->Arg(5)->Arg(50)->Arg(95);

void BM_KernelVariance(benchmark::State& state) {
  const auto& spec = spec075();
  for (auto _ : state) {
    benchmark::DoNotOptimize(subfbm::kernel_variance_sub(1.0, spec));
  }
}
BENCHMARK(BM_KernelVariance);

}  // namespace

BENCHMARK_MAIN();
