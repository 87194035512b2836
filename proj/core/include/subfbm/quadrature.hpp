#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "subfbm/errors.hpp"

namespace subfbm {

// Tolerances for the adaptive integrator. singularity_exponent records the
// kernel's endpoint exponent H - 3/2 (in (-1, -1/2) for H in (1/2, 1)); the
// engine itself only consumes the tolerances, kernel code consumes the rest.
struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
  double singularity_exponent = 0.0;

  // Tolerances for integrals nested inside another integrand evaluation;
  // tightened so inner error does not pollute the outer estimate, but floored
  // well above double roundoff: pushing the inner target to ~1e-16 makes the
  // refinement loop chase quadrature noise at large cost and no gain.
  QuadratureConfig inner() const {
    QuadratureConfig c = *this;
    c.abs_tol = std::max(abs_tol * 1e-2, 1e-14);
    c.rel_tol = std::max(rel_tol * 1e-2, 1e-13);
    return c;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error bound
  int panels = 0;
};

namespace detail {

inline constexpr std::array<double, 7> kGl7Nodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972, 0.7415311855993945, 0.9491079123427585,
};
inline constexpr std::array<double, 7> kGl7Weights = {
    0.12948496616887065, 0.2797053914892766, 0.3818300505051183,
    0.41795918367346896, 0.3818300505051183, 0.2797053914892766,
    0.12948496616887065,
};
inline constexpr std::array<double, 15> kGl15Nodes = {
    -0.9879925180204854, -0.937273392400706, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.20119409399743451, 0.0, 0.20119409399743451, 0.3941513470775634,
    0.5709721726085388, 0.7244177313601701, 0.8482065834104272,
    0.937273392400706, 0.9879925180204854,
};
inline constexpr std::array<double, 15> kGl15Weights = {
    0.030753241996118647, 0.07036604748810807, 0.10715922046717177,
    0.1395706779261539, 0.16626920581699378, 0.18616100001556188,
    0.19843148532711125, 0.2025782419255609, 0.19843148532711125,
    0.18616100001556188, 0.16626920581699378, 0.1395706779261539,
    0.10715922046717177, 0.07036604748810807, 0.030753241996118647,
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;  // GL15 estimate
  double error = 0.0;  // |GL15 - GL7|
};

// Worst panel first; equal errors break toward the smaller left endpoint so
// refinement order (and therefore the result) is reproducible.
struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

// Compensated (Neumaier) summation; panel totals must not depend on how many
// refinement steps ran before convergence.
class StableSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class F>
Panel evaluate_panel(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double g15 = 0.0;
  for (std::size_t j = 0; j < 15; ++j) {
    g15 += kGl15Weights[j] * f(mid + half * kGl15Nodes[j]);
  }
  double g7 = 0.0;
  for (std::size_t j = 0; j < 7; ++j) {
    g7 += kGl7Weights[j] * f(mid + half * kGl7Nodes[j]);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = g15 * half;
  p.error = std::abs((g15 - g7) * half);
  if (!std::isfinite(p.value) || !std::isfinite(p.error)) {
    throw QuadratureError("integrand produced a non-finite value", p.value, p.error);
  }
  return p;
}

}  // namespace detail

// Adaptive Gauss-Legendre 15/7 integration of f over [a, b]. Initial panels
// are [a,b] cut at the given breakpoints (callers seed known edges or
// discontinuities); the worst panel is bisected until the summed error
// estimate meets max(abs_tol, rel_tol * |value|) or the panel budget is spent.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    const QuadratureConfig& cfg,
                                    std::span<const double> breakpoints = {}) {
  if (!(a <= b)) throw std::invalid_argument("integrate_adaptive: a > b");
  if (a == b) return {0.0, 0.0, 0};

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> queue;
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    auto p = detail::evaluate_panel(f, cuts[j], cuts[j + 1]);
    value += p.value;
    error += p.error;
    ++panels;
    queue.push(p);
  }

  auto tolerance = [&](double v) {
    return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(v));
  };

  while (error > tolerance(value) && panels < cfg.max_subdivisions) {
    detail::Panel worst = queue.top();
    queue.pop();
    value -= worst.value;
    error -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Panel is at floating-point resolution; keep its estimate as final.
      value += worst.value;
      error += worst.error;
      break;
    }
    auto left = detail::evaluate_panel(f, worst.a, mid);
    auto right = detail::evaluate_panel(f, mid, worst.b);
    value += left.value + right.value;
    error += left.error + right.error;
    ++panels;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum panels in left-to-right order so the result is independent of the
  // refinement history's incremental rounding.
  std::vector<detail::Panel> all;
  all.reserve(queue.size());
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  detail::StableSum vsum, esum;
  for (const auto& p : all) {
    vsum.add(p.value);
    esum.add(p.error);
  }
  QuadratureResult result{vsum.value(), esum.value(), panels};

  if (result.error > tolerance(result.value)) {
    throw QuadratureError("adaptive integration did not converge within the panel budget",
                          result.value, result.error);
  }
  return result;
}

// Integral of f over [0, b] where f behaves like s^q near 0 (q > -1). The
// substitution s = w^(1/(q+1)) maps the edge factor to a constant, removing
// the singularity (q < 0) or derivative blow-up (0 < q < 1) exactly.
template <class F>
QuadratureResult integrate_left_power(F&& f, double b, double q,
                                      const QuadratureConfig& cfg) {
  if (!(b >= 0.0)) throw std::invalid_argument("integrate_left_power: b < 0");
  if (!(q > -1.0)) throw std::invalid_argument("integrate_left_power: q <= -1");
  if (b == 0.0) return {0.0, 0.0, 0};
  const double p = q + 1.0;
  if (p == 1.0) return integrate_adaptive(f, 0.0, b, cfg);
  const double inv_p = 1.0 / p;
  auto g = [&f, inv_p](double w) {
    const double s = std::pow(w, inv_p);
    return f(s) * inv_p * (s / w);  // f(s) * s'(w), with s'(w) = s / (p w)
  };
  return integrate_adaptive(g, 0.0, std::pow(b, p), cfg);
}

}  // namespace subfbm
