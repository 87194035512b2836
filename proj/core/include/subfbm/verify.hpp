#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "subfbm/statistics.hpp"

namespace subfbm {

struct SuiteResult {
  std::string suite;
  std::vector<StatReport> reports;
  bool pass = true;

  void add(StatReport report) {
    pass = pass && report.pass;
    reports.push_back(std::move(report));
  }
  std::string to_json(const std::string& metadata_json = "{}") const {
    return reports_to_json(reports, suite, metadata_json);
  }
};

// Default verification fixtures: six covariance pairs and the all-pairs grid
// over {1/8, 1/4, 1/2, 3/4, 1} used by the increment checks, expressed as
// grid indices for resolution n.
std::vector<std::pair<int, int>> default_cov_pairs(int n);
std::vector<std::pair<int, int>> default_increment_pairs(int n);

// Deterministic kernel checks (no Monte Carlo): variance fixed points for
// both kernels, the t^2H scaling grid, covariance reproduction through the
// kernel pair integral on a 10x10 grid, and the step-kernel L2 table.
struct KernelSuiteConfig {
  double cov_abs_tol = 1e-6;
  double scaling_rel_tol = 1e-6;
  double fixed_point_rel_tol = 1e-8;
  std::vector<int> step_m = {4, 16, 64, 256};
};
SuiteResult verify_kernel(const KernelSpec& spec, const KernelSuiteConfig& config = {});

// Empirical covariance at the given index pairs within z_threshold standard
// errors of the scheme's analytic covariance.
SuiteResult verify_covariance(const PathEnsemble& ensemble,
                              const std::vector<std::pair<int, int>>& pairs,
                              double z_threshold = 3.0);

// Increment second moments inside the two-sided variance bounds, with
// z_threshold * SE slack on each side, plus the increment-product moment
// bound with its fitted constant (reported, not asserted to a fixed value).
SuiteResult verify_sandwich(const PathEnsemble& ensemble,
                            const std::vector<std::pair<int, int>>& pairs,
                            double z_threshold = 3.0);

// One-sample KS of the standardized marginal at grid index against the
// standard normal; exact_sd should be the construction's own finite-n
// standard deviation (sqrt of the weight row's sum of squares) so the null
// is fully specified.
SuiteResult verify_gaussianity(const PathEnsemble& ensemble, int index,
                               double exact_sd, double level = 0.01);

// Convergence experiments for the three discretization error terms.
//
// d1: mean-square gap between paths built from the floor-time and exact-time
//     kernel rows at an off-grid time; bounded by gap^2H and decaying at that
//     rate in n (slope fitted at slope_time, whose floor gap scales ~ 1/n).
// d2: mean-square gap between the exact-time path and the overlap-form
//     stepped path, dominated by the step kernel's L2 distance uniformly in n.
// d3: mean-square gap between the block-form and overlap-form stepped paths
//     at t = 1 (partition-aligned, where the two forms differ only by the
//     straddling-cell corrections), decaying like 1/n with the (4/n) sum
//     bound; the n list must avoid multiples of m or the gap is identically 0.
struct LadderConfig {
  double slope_time = 0.37;
  std::vector<double> fixture_times = {0.37, 0.61, 0.93};
  std::vector<int> d1_n = {64, 256, 1024};
  int d2_m = 16;
  std::vector<int> d2_n = {64, 256};
  int d3_m = 16;
  std::vector<int> d3_n = {72, 264, 1032};
  std::vector<int> step_m = {4, 16, 64, 256};
  int mc_paths = 20000;
  std::uint64_t seed = 2026;
  double slope_band = 0.3;
  int workers = 1;
};
SuiteResult verify_ladder(const KernelSpec& spec, const LadderConfig& config = {});

// Rows of an error-vs-resolution table produced by the ladder experiments.
struct ConvergenceRow {
  int resolution = 0;
  double mc_estimate = 0.0;
  double mc_se = 0.0;
  double exact_value = 0.0;
  double bound = 0.0;
};

// The d1/d2/d3 experiments as reusable tables (the CLI convergence command
// and verify_ladder share these).
std::vector<ConvergenceRow> ladder_d1_table(const KernelSpec& spec, double t,
                                            const std::vector<int>& ns,
                                            int mc_paths, std::uint64_t seed);
std::vector<ConvergenceRow> ladder_d2_table(const KernelSpec& spec, double t,
                                            int m, const std::vector<int>& ns,
                                            int mc_paths, std::uint64_t seed);
std::vector<ConvergenceRow> ladder_d3_table(const KernelSpec& spec, int m,
                                            const std::vector<int>& ns,
                                            int mc_paths, std::uint64_t seed);

// L2 distance between the step kernel K^m(t, .) and the exact kernel section.
double step_kernel_l2_distance(const KernelSpec& spec, int m, double t);

}  // namespace subfbm
