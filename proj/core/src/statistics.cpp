#include "subfbm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace subfbm {

namespace {

// Finite-sample argument correction for the asymptotic KS distribution.
double ks_lambda(double d, double effective_n) {
  const double rn = std::sqrt(effective_n);
  return d * (rn + 0.12 + 0.11 / rn);
}

template <class F>
Estimate fold_paths(const PathEnsemble& ensemble, F&& per_path) {
  const std::size_t M = static_cast<std::size_t>(ensemble.M);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t p = 0; p < M; ++p) {
    const double x = per_path(p);
    sum += x;
    sum_sq += x * x;
  }
  Estimate e;
  e.count = M;
  e.value = sum / static_cast<double>(M);
  if (M > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * e.value) / static_cast<double>(M - 1));
    e.se = std::sqrt(var / static_cast<double>(M));
  }
  return e;
}

void check_index(const PathEnsemble& ensemble, int idx) {
  if (idx < 0 || idx > ensemble.n) {
    throw std::invalid_argument("ensemble grid index out of range");
  }
}

}  // namespace

std::string reports_to_json(std::span<const StatReport> reports,
                            const std::string& suite,
                            const std::string& metadata_json) {
  nlohmann::json j;
  j["suite"] = suite;
  j["metadata"] = nlohmann::json::parse(metadata_json);
  bool all_pass = true;
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({
        {"name", r.name},
        {"grid", r.grid},
        {"estimate", r.estimate},
        {"target", r.target},
        {"se", r.se},
        {"z", r.z},
        {"level", r.level},
        {"pass", r.pass},
        {"detail", r.detail},
    });
    all_pass = all_pass && r.pass;
  }
  j["reports"] = std::move(arr);
  j["pass"] = all_pass;
  return j.dump(2) + "\n";
}

Estimate mean_and_se(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_and_se: empty sample");
  double sum = 0.0, sum_sq = 0.0;
  for (double x : samples) {
    sum += x;
    sum_sq += x * x;
  }
  Estimate e;
  e.count = samples.size();
  e.value = sum / static_cast<double>(e.count);
  if (e.count > 1) {
    const double var = std::max(
        0.0, (sum_sq - sum * e.value) / static_cast<double>(e.count - 1));
    e.se = std::sqrt(var / static_cast<double>(e.count));
  }
  return e;
}

Estimate empirical_cov(const PathEnsemble& ensemble, int s_idx, int t_idx) {
  check_index(ensemble, s_idx);
  check_index(ensemble, t_idx);
  return fold_paths(ensemble, [&](std::size_t p) {
    const auto path = ensemble.path(static_cast<int>(p));
    return path[static_cast<std::size_t>(s_idx)] * path[static_cast<std::size_t>(t_idx)];
  });
}

Estimate empirical_increment_m2(const PathEnsemble& ensemble, int s_idx, int t_idx) {
  check_index(ensemble, s_idx);
  check_index(ensemble, t_idx);
  return fold_paths(ensemble, [&](std::size_t p) {
    const auto path = ensemble.path(static_cast<int>(p));
    const double d = path[static_cast<std::size_t>(t_idx)] -
                     path[static_cast<std::size_t>(s_idx)];
    return d * d;
  });
}

Estimate empirical_increment_abs_product(const PathEnsemble& ensemble, int s_idx,
                                         int v_idx, int u_idx) {
  check_index(ensemble, s_idx);
  check_index(ensemble, v_idx);
  check_index(ensemble, u_idx);
  if (!(s_idx <= v_idx && v_idx <= u_idx)) {
    throw std::invalid_argument("increment product requires s <= v <= u");
  }
  return fold_paths(ensemble, [&](std::size_t p) {
    const auto path = ensemble.path(static_cast<int>(p));
    const double d1 = path[static_cast<std::size_t>(v_idx)] -
                      path[static_cast<std::size_t>(s_idx)];
    const double d2 = path[static_cast<std::size_t>(u_idx)] -
                      path[static_cast<std::size_t>(v_idx)];
    return std::abs(d1) * std::abs(d2);
  });
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form of the CDF; three terms reach double precision here.
    const double v = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda *
                       (std::exp(-v) + std::exp(-9.0 * v) + std::exp(-25.0 * v));
    return 1.0 - cdf;
  }
  double tail = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    tail += 2.0 * sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::max(0.0, tail);
}

KsResult ks_test_standard_normal(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("ks_test_standard_normal: empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = normal_cdf(sorted[i]);
    const double lo = cdf - static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - cdf;
    d = std::max({d, lo, hi});
  }
  KsResult r;
  r.statistic = d;
  r.n1 = n;
  r.p_value = kolmogorov_tail(ks_lambda(d, static_cast<double>(n)));
  return r;
}

KsResult ks_test_two_sample(std::span<const double> first,
                            std::span<const double> second) {
  if (first.empty() || second.empty()) {
    throw std::invalid_argument("ks_test_two_sample: empty sample");
  }
  std::vector<double> x(first.begin(), first.end());
  std::vector<double> y(second.begin(), second.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx -
                             static_cast<double>(j) / ny));
  }
  KsResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.n2 = y.size();
  const double ne = nx * ny / (nx + ny);
  r.p_value = kolmogorov_tail(ks_lambda(d, ne));
  return r;
}

RateFit fit_rate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_rate needs matching lists of length >= 2");
  }
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw std::invalid_argument("fit_rate requires positive xs and ys");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("fit_rate requires at least two distinct xs");
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double resid = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += resid * resid;
    fit.max_residual = std::max(fit.max_residual, std::abs(resid));
  }
  if (xs.size() > 2) {
    fit.slope_se = std::sqrt(ss_res / (n - 2.0) / sxx);
  }
  return fit;
}

double l2_kernel_distance(const std::function<double(double)>& f,
                          const std::function<double(double)>& g,
                          const QuadratureConfig& quad,
                          std::span<const double> breakpoints) {
  auto sq = [&](double u) {
    const double d = f(u) - g(u);
    return d * d;
  };
  const double v = integrate_adaptive(sq, 0.0, 1.0, quad, breakpoints).value;
  return std::sqrt(std::max(0.0, v));
}

}  // namespace subfbm
