#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subfbm/quadrature.hpp"
#include "subfbm/simulate.hpp"

namespace subfbm {

// Point estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

// One verification verdict: estimate vs analytic target with the slack that
// justified the pass/fail call. The verdict is a pure function of the stored
// numbers, never of hidden state.
struct StatReport {
  std::string name;
  std::string grid;       // which points/pairs/resolutions were tested
  double estimate = 0.0;
  double target = 0.0;
  double se = 0.0;
  double z = 0.0;         // (estimate - target) / se when se > 0
  double level = 0.0;     // z threshold or test level, per `name`
  bool pass = false;
  std::string detail;
};

std::string reports_to_json(std::span<const StatReport> reports,
                            const std::string& suite,
                            const std::string& metadata_json = "{}");

Estimate mean_and_se(std::span<const double> samples);

// Sample mean of X(s) * X(t) over paths; SE from the product sample variance.
Estimate empirical_cov(const PathEnsemble& ensemble, int s_idx, int t_idx);

// Sample mean of (X(t) - X(s))^2 over paths.
Estimate empirical_increment_m2(const PathEnsemble& ensemble, int s_idx, int t_idx);

// Sample mean of |X(v) - X(s)| * |X(u) - X(v)| for s <= v <= u: the moment
// controlled by the increment-product tightness bound C * (u - s)^2H.
Estimate empirical_increment_abs_product(const PathEnsemble& ensemble, int s_idx,
                                         int v_idx, int u_idx);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;  // 0 for one-sample tests
};

// One-sample Kolmogorov-Smirnov against the standard normal law; the null is
// fully specified, so the asymptotic Kolmogorov distribution applies (with
// the usual finite-sample argument correction).
KsResult ks_test_standard_normal(std::span<const double> samples);

// Two-sample Kolmogorov-Smirnov.
KsResult ks_test_two_sample(std::span<const double> first,
                            std::span<const double> second);

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_tail(double lambda);

double normal_cdf(double x);

// Least-squares slope of log(y) against log(x): the empirical convergence
// rate. Requires at least two distinct positive xs and positive ys.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;      // 0 when the fit has no residual degrees of freedom
  double max_residual = 0.0;  // in log space
};

RateFit fit_rate(std::span<const double> xs, std::span<const double> ys);

// L2([0, 1]) distance between two kernel sections, integrating (f - g)^2
// adaptively with caller-supplied breakpoints at known discontinuities.
double l2_kernel_distance(const std::function<double(double)>& f,
                          const std::function<double(double)>& g,
                          const QuadratureConfig& quad,
                          std::span<const double> breakpoints = {});

}  // namespace subfbm
