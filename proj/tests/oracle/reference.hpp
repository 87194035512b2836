#pragma once

// Reference integrators for cross-checking the library's quadrature and
// kernel code. These evaluate the defining integrals directly with a
// tanh-sinh rule (a different algorithm and a different change of variables
// than the library uses), so agreement is evidence of correctness rather
// than a tautology. The two-argument integrand forms receive the distance to
// the nearest interval endpoint, which keeps x - s accurate where the raw
// integrand is singular.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace testoracle {

inline boost::math::quadrature::tanh_sinh<double>& integrator() {
  static boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

// integral_s^t (x^2 - s^2)^(H - 3/2) dx, integrable singularity at x = s.
inline double inner_sub_raw(double s, double t, double H) {
  if (!(0.0 < s && s < t)) throw std::invalid_argument("inner_sub_raw domain");
  auto f = [&](double x, double xc) {
    const double x_minus_s = (x - s <= t - x) ? std::abs(xc) : (x - s);
    // Two separate pow calls: for tiny s the product x_minus_s * (x + s)
    // can underflow to zero near the left endpoint, turning an integrable
    // singularity into pow(0, negative) = inf.
    return std::pow(x_minus_s, H - 1.5) * std::pow(x + s, H - 1.5);
  };
  return integrator().integrate(f, s, t, 1e-13);
}

// integral_s^t u^(H - 1/2) (u - s)^(H - 3/2) du.
inline double inner_fbm_raw(double s, double t, double H) {
  if (!(0.0 < s && s < t)) throw std::invalid_argument("inner_fbm_raw domain");
  auto f = [&](double u, double uc) {
    const double u_minus_s = (u - s <= t - u) ? std::abs(uc) : (u - s);
    return std::pow(u, H - 0.5) * std::pow(u_minus_s, H - 1.5);
  };
  return integrator().integrate(f, s, t, 1e-13);
}

inline double k_sub_raw(double t, double s, double H, double c_sub) {
  if (s <= 0.0 || s >= t) return 0.0;
  return c_sub * std::pow(s, 1.5 - H) * inner_sub_raw(s, t, H);
}

inline double k_fbm_raw(double t, double s, double H, double c_fbm) {
  if (s <= 0.0 || s >= t) return 0.0;
  return c_fbm * std::pow(s, 0.5 - H) * inner_fbm_raw(s, t, H);
}

// integral_0^t k(t,u)^2 du with the kernel built from the raw inner integral.
// The integrand vanishes like u^(2H-1) at the origin, so values of u below
// a 1e-10 relative floor contribute far less than the integration tolerance;
// skipping them keeps the rule from probing u where the raw kernel
// evaluation under- or overflows.
inline double variance_sub_raw(double t, double H, double c_sub) {
  auto f = [&](double u, double /*uc*/) {
    if (u < 1e-10 * t) return 0.0;
    const double k = k_sub_raw(t, u, H, c_sub);
    return k * k;
  };
  return integrator().integrate(f, 0.0, t, 1e-10);
}

// integral_0^s k(t,u) k(s,u) du for s <= t, with the same origin floor as
// the variance rule.
inline double covariance_sub_raw(double s, double t, double H, double c_sub) {
  if (s > t) throw std::invalid_argument("covariance_sub_raw wants s <= t");
  auto f = [&](double u, double /*uc*/) {
    if (u < 1e-10 * s) return 0.0;
    return k_sub_raw(t, u, H, c_sub) * k_sub_raw(s, u, H, c_sub);
  };
  return integrator().integrate(f, 0.0, s, 1e-10);
}

// Closed-form prefactor for the fractional kernel.
inline double c_fbm_closed(double H) {
  const double c_h =
      std::sqrt(2.0 * H * boost::math::tgamma(1.5 - H) /
                (boost::math::tgamma(H + 0.5) * boost::math::tgamma(2.0 - 2.0 * H)));
  return c_h * (H - 0.5);
}

}  // namespace testoracle
