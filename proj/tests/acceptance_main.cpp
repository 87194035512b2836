// Acceptance harness: one PASS/FAIL line per criterion, exit 0 only if all
// eight pass. Each criterion is a property of the construction checked
// against analytic laws or independent oracles at fixed seeds; thresholds
// and sample sizes are part of the contract and must not be loosened here.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "subfbm/covariance.hpp"
#include "subfbm/kernel.hpp"
#include "subfbm/kernel_matrix.hpp"
#include "subfbm/matrix_cache.hpp"
#include "subfbm/noise.hpp"
#include "subfbm/simulate.hpp"
#include "subfbm/statistics.hpp"
#include "subfbm/verify.hpp"

using namespace subfbm;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Stopwatch {
  double t0 = now_seconds();
  double lap() const { return now_seconds() - t0; }
};

int g_passed = 0;
int g_total = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
  ++g_total;
  if (pass) ++g_passed;
  std::printf("CRITERION %d %s: %s (%s)\n", number, name,
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

KernelSpec calibrated(double h) {
  return calibrate_sub(HurstIndex(h), QuadratureConfig{});
}

PathEnsemble gaussian_ensemble(const KernelMatrix& matrix, int paths,
                               std::uint64_t seed) {
  EnsembleConfig cfg;
  cfg.M = paths;
  cfg.master_seed = seed;
  cfg.distribution = Distribution::StandardGaussian;
  cfg.workers = 1;
  return run_ensemble(matrix, cfg);
}

PathEnsemble sign_ensemble(const KernelMatrix& matrix, int paths,
                           std::uint64_t seed) {
  EnsembleConfig cfg;
  cfg.M = paths;
  cfg.master_seed = seed;
  cfg.distribution = Distribution::Rademacher;
  cfg.workers = 1;
  return run_ensemble(matrix, cfg);
}

// --------------------------------------------------------------------------
// 1. Variance fixed point and self-similarity scaling of the calibrated
//    kernel, three Hurst values.

void criterion_1(const std::vector<KernelSpec>& specs) {
  double worst_fixed = 0.0;
  double worst_scaling = 0.0;
  for (const KernelSpec& spec : specs) {
    const double h = spec.H.value();
    const double target1 = 2.0 - std::pow(2.0, 2.0 * h - 1.0);
    const double fixed =
        std::abs(kernel_variance_sub(1.0, spec) - target1) / target1;
    worst_fixed = std::max(worst_fixed, fixed);
    for (int i = 1; i <= 10; ++i) {
      const double t = 0.1 * i;
      const double want = target1 * std::pow(t, 2.0 * h);
      const double resid =
          std::abs(kernel_variance_sub(t, spec) - want) / want;
      worst_scaling = std::max(worst_scaling, resid);
    }
  }
  const bool pass = worst_fixed < 1e-8 && worst_scaling < 1e-6;
  report(1, "calibration-fixed-point", pass,
         fmt("max fixed-point resid %.3g vs 1e-8, max scaling resid %.3g vs "
             "1e-6, H in {0.6, 0.75, 0.9}",
             worst_fixed, worst_scaling));
}

// --------------------------------------------------------------------------
// 2. Deterministic covariance reproduction through the kernel pair integral
//    on a 10x10 grid at H = 0.75.

void criterion_2(const KernelSpec& spec) {
  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    for (int j = i; j <= 10; ++j) {
      const double s = 0.1 * i;
      const double t = 0.1 * j;
      const double got = i == j ? kernel_variance_sub(t, spec)
                                : kernel_covariance_sub(s, t, spec);
      const double want = cov_analytic(CovarianceKind::SubFbm, spec.H, s, t);
      worst = std::max(worst, std::abs(got - want));
    }
  }
  const bool pass = worst < 1e-6;
  report(2, "covariance-reproduction", pass,
         fmt("worst |kernel - analytic| %.3g vs 1e-6 on the 10x10 grid",
             worst));
}

// --------------------------------------------------------------------------
// 3. Monte Carlo finite-dimensional agreement: empirical covariance at six
//    pairs within 3 SE, and the standardized t = 1 marginal passes a KS test
//    at the 1% level. Gaussian innovations, n = 256, M = 1e5, seed 301.

void criterion_3(const KernelMatrix& matrix, const PathEnsemble& ens) {
  const SuiteResult cov = verify_covariance(ens, default_cov_pairs(ens.n), 3.0);
  double worst_z = 0.0;
  for (const auto& r : cov.reports) worst_z = std::max(worst_z, std::abs(r.z));

  const double sd = std::sqrt(matrix.row_sum_squares(matrix.rows() - 1));
  const SuiteResult ks = verify_gaussianity(ens, ens.n, sd, 0.01);
  const double p = ks.reports.front().estimate;

  const bool pass = cov.pass && ks.pass;
  report(3, "empirical-covariance-and-marginal", pass,
         fmt("6 pairs worst |z| %.2f vs 3, KS p %.3f vs 0.01; n=256 M=1e5 "
             "gaussian seed 301",
             worst_z, p));
}

// --------------------------------------------------------------------------
// 4. Variance sandwich: increment second moments inside the two-sided bounds
//    with 3 SE slack, H in {0.6, 0.9}, n = 256, M = 1e5.

bool sandwich_holds(const PathEnsemble& ens, double* worst_dev) {
  const SuiteResult suite =
      verify_sandwich(ens, default_increment_pairs(ens.n), 3.0);
  bool pass = true;
  double dev = 0.0;
  for (const auto& r : suite.reports) {
    if (r.name != "increment-m2") continue;  // the two-sided bound checks
    pass = pass && r.pass;
    dev = std::max(dev, std::abs(r.z));  // deviation from the exact moment
  }
  if (worst_dev) *worst_dev = dev;
  return pass;
}

void criterion_4(const PathEnsemble& h060, const PathEnsemble& h090) {
  double m1 = 0.0, m2 = 0.0;
  const bool a = sandwich_holds(h060, &m1);
  const bool b = sandwich_holds(h090, &m2);
  report(4, "variance-sandwich", a && b,
         fmt("increment moments inside [lower-3SE, upper+3SE]; worst "
             "deviation from exact H=0.6: %.2f SE, H=0.9: %.2f SE; seeds "
             "401/402, n=256 M=1e5",
             m1, m2));
}

// --------------------------------------------------------------------------
// 5. Discretization-error ladder: off-grid displacement decays at slope
//    -2H (+-0.3) over n in {64, 256, 1024}; block-vs-overlap gap decays at
//    slope -1 (+-0.3); the step-kernel L2 distance strictly decreases over
//    m in {4, 16, 64, 256}.

void criterion_5(const KernelSpec& spec) {
  LadderConfig cfg;  // frozen defaults: seed 2026, 20000 paired paths
  const SuiteResult suite = verify_ladder(spec, cfg);

  bool d1 = false, d3 = false, l2 = false;
  double d1_slope = 0.0, d3_slope = 0.0;
  for (const auto& r : suite.reports) {
    if (r.name == "d1-rate") {
      d1 = r.pass;
      d1_slope = r.estimate;
    } else if (r.name == "d3-rate") {
      d3 = r.pass;
      d3_slope = r.estimate;
    } else if (r.name == "step-l2-decreasing") {
      l2 = r.pass;
    }
  }
  report(5, "error-ladder-rates", d1 && d3 && l2,
         fmt("d1 slope %.3f vs -1.5+-0.3, d3 slope %.3f vs -1+-0.3, step L2 "
             "decreasing over m={4,16,64,256}: %s; ladder suite overall: %s",
             d1_slope, d3_slope, l2 ? "yes" : "no",
             suite.pass ? "pass" : "fail"));
}

// --------------------------------------------------------------------------
// 6. Exact-sampler equivalence: marginals of the n = 512 construction match
//    exact Cholesky samples of the target law (two-sample KS at 1%) at
//    t in {0.25, 0.5, 1.0}, M = 1e4 per side.

void criterion_6(const KernelSpec& spec, const KernelMatrix& matrix) {
  const int paths = 10000;
  const PathEnsemble ens = gaussian_ensemble(matrix, paths, 611);

  const std::vector<double> times = {0.25, 0.5, 1.0};
  const int dim = static_cast<int>(times.size());

  // Exact covariance matrix of the target law and its Cholesky factor.
  double cov[3][3];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      cov[i][j] =
          cov_analytic(CovarianceKind::SubFbm, spec.H, times[i], times[j]);
  double chol[3][3] = {};
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = cov[i][j];
      for (int k = 0; k < j; ++k) acc -= chol[i][k] * chol[j][k];
      chol[i][j] = (i == j) ? std::sqrt(acc) : acc / chol[j][j];
    }
  }

  // Oracle samples: three exact marginal arrays from joint Cholesky draws.
  std::vector<std::vector<double>> oracle(times.size(),
                                          std::vector<double>(paths));
  for (int p = 0; p < paths; ++p) {
    NoiseStream stream(612, static_cast<std::uint64_t>(p),
                       Distribution::StandardGaussian);
    double z[3];
    for (int k = 0; k < dim; ++k) z[k] = stream.next();
    for (int i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (int k = 0; k <= i; ++k) acc += chol[i][k] * z[k];
      oracle[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = acc;
    }
  }

  bool pass = true;
  std::string ps;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const int idx = floor_index(ens.n, times[i]);
    std::vector<double> marg(paths);
    for (int p = 0; p < paths; ++p) marg[static_cast<std::size_t>(p)] =
        ens.value(p, idx);
    const KsResult ks = ks_test_two_sample(marg, oracle[i]);
    pass = pass && ks.p_value >= 0.01;
    ps += fmt("%st=%.2f:p=%.3f", i ? " " : "", times[i], ks.p_value);
  }
  report(6, "exact-sampler-equivalence", pass,
         fmt("two-sample KS at 1%% level, %s; n=512 M=1e4 seeds 611/612",
             ps.c_str()));
}

// --------------------------------------------------------------------------
// 7. Innovation-law invariance: the covariance/marginal and sandwich checks
//    hold under sign innovations exactly as under Gaussian ones.

void criterion_7(const KernelMatrix& mat075, const KernelMatrix& mat060,
                 const KernelMatrix& mat090) {
  const int paths = 100000;
  const PathEnsemble e075 = sign_ensemble(mat075, paths, 701);
  const SuiteResult cov = verify_covariance(e075, default_cov_pairs(e075.n), 3.0);
  const double sd = std::sqrt(mat075.row_sum_squares(mat075.rows() - 1));
  const SuiteResult ks = verify_gaussianity(e075, e075.n, sd, 0.01);

  const PathEnsemble e060 = sign_ensemble(mat060, paths, 702);
  const PathEnsemble e090 = sign_ensemble(mat090, paths, 703);
  const bool s060 = sandwich_holds(e060, nullptr);
  const bool s090 = sandwich_holds(e090, nullptr);

  const bool pass = cov.pass && ks.pass && s060 && s090;
  report(7, "sign-innovation-invariance", pass,
         fmt("covariance %s, standardized-marginal KS p %.3f vs 0.01, "
             "sandwich H=0.6 %s H=0.9 %s; seeds 701/702/703",
             cov.pass ? "pass" : "fail", ks.reports.front().estimate,
             s060 ? "pass" : "fail", s090 ? "pass" : "fail"));
}

// --------------------------------------------------------------------------
// 8. Determinism across worker counts and the performance envelope of the
//    large configuration.

void criterion_8(const KernelSpec& spec) {
  // Bit-identical ensembles at any worker count.
  const KernelMatrix small_w1 = build_matrix_floor(128, spec, 1);
  const KernelMatrix small_w5 = build_matrix_floor(128, spec, 5);
  bool deterministic = small_w1.weights == small_w5.weights;

  EnsembleConfig cfg;
  cfg.M = 600;
  cfg.master_seed = 801;
  cfg.distribution = Distribution::StandardGaussian;
  cfg.workers = 1;
  const PathEnsemble w1 = run_ensemble(small_w1, cfg);
  cfg.workers = 5;
  const PathEnsemble w5 = run_ensemble(small_w1, cfg);
  cfg.workers = 8;
  const PathEnsemble w8 = run_ensemble(small_w1, cfg);
  deterministic = deterministic && w1.values == w5.values &&
                  w1.values == w8.values;

  // Performance envelope: n = 1024, M = 1e4 paths with the matrix cached.
  namespace fs = std::filesystem;
  const fs::path cache_dir = fs::path("acceptance_scratch") / "cache";
  fs::create_directories(cache_dir);
  Stopwatch build_watch;
  bool cache_hit = false;
  const KernelMatrix big = obtain_matrix(Scheme::SubFloor, 1024, 0, spec,
                                         cache_dir.string(), 1, &cache_hit);
  const double build_wall = build_watch.lap();

  Stopwatch run_watch;
  EnsembleConfig big_cfg;
  big_cfg.M = 10000;
  big_cfg.master_seed = 802;
  big_cfg.distribution = Distribution::StandardGaussian;
  big_cfg.workers = 1;
  const PathEnsemble big_ens = run_ensemble(big, big_cfg);
  const double run_wall = run_watch.lap();
  const bool fast_enough = run_wall < 300.0;

  // Touch the result so the run cannot be elided.
  const double checksum_value = big_ens.value(9999, 1024);

  report(8, "determinism-and-performance", deterministic && fast_enough,
         fmt("worker counts {1,5,8} bit-identical: %s; n=1024 M=1e4 ensemble "
             "%.1fs vs 300s soft budget (matrix %s in %.1fs, sample value "
             "%.4f)",
             deterministic ? "yes" : "no", run_wall,
             cache_hit ? "loaded from cache" : "built", build_wall,
             checksum_value));
}

}  // namespace

int main() {
  std::printf("acceptance checks: subfractional random-walk construction\n");
  const Stopwatch total;
  try {
    Stopwatch cal_watch;
    const std::vector<KernelSpec> specs = {calibrated(0.60), calibrated(0.75),
                                           calibrated(0.90)};
    const KernelSpec& spec075 = specs[1];
    std::printf("calibrated H in {0.6, 0.75, 0.9} in %.1fs\n", cal_watch.lap());

    criterion_1(specs);
    criterion_2(spec075);

    Stopwatch build_watch;
    const KernelMatrix mat075 = build_matrix_floor(256, spec075, 1);
    const KernelMatrix mat060 = build_matrix_floor(256, specs[0], 1);
    const KernelMatrix mat090 = build_matrix_floor(256, specs[2], 1);
    const KernelMatrix mat512 = build_matrix_floor(512, spec075, 1);
    std::printf("built n=256 weight matrices (3 Hurst values) and n=512 in "
                "%.1fs\n",
                build_watch.lap());

    criterion_3(mat075, gaussian_ensemble(mat075, 100000, 301));
    criterion_4(gaussian_ensemble(mat060, 100000, 401),
                gaussian_ensemble(mat090, 100000, 402));
    criterion_5(spec075);
    criterion_6(spec075, mat512);
    criterion_7(mat075, mat060, mat090);
    criterion_8(spec075);
  } catch (const std::exception& e) {
    std::printf("ABORTED: %s\n", e.what());
    std::printf("ACCEPTANCE: %d/8 PASS\n", g_passed);
    return 1;
  }

  std::printf("total wall time %.1fs\n", total.lap());
  std::printf("ACCEPTANCE: %d/8 PASS\n", g_passed);
  return g_passed == 8 ? 0 : 1;
}
