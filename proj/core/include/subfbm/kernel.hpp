#pragma once

#include <string>

#include "subfbm/hurst.hpp"
#include "subfbm/quadrature.hpp"

namespace subfbm {

// Calibrated kernel parameters: the single source of truth for evaluating the
// subfractional kernel k_sub and the fractional comparison kernel k_fbm.
// c_sub and c_fbm fold the analytically unstated normalizing prefactors into
// one number each, fixed numerically so the t = 1 variances come out exact.
struct KernelSpec {
  HurstIndex H;
  double c_sub = 0.0;  // > 0 once calibrate_sub has run
  double c_fbm = 0.0;  // > 0 once calibrate_fbm has run
  QuadratureConfig quad;
};

// I(s, t) = integral over [s, t] of (x^2 - s^2)^(H - 3/2) dx.
// The integrand has an integrable singularity at x = s; it is removed exactly
// by the substitution x = s + y^(1/(H - 1/2)) before adaptive integration.
// Relaxed boundary: s == t returns 0. s > t, s <= 0 or t > 1 throw.
double inner_integral(double s, double t, const KernelSpec& spec);

// Same integral for the fractional kernel: integral of u^(H-1/2) (u-s)^(H-3/2).
double inner_integral_fbm(double s, double t, const KernelSpec& spec);

// Subfractional kernel k_sub(t, s) = c_sub * s^(3/2-H) * I(s, t) for
// 0 < s < t; exactly 0 for s >= t or s <= 0 (indicator support, and value 0
// at s = 0 by continuity).
double k_sub(double t, double s, const KernelSpec& spec);

// Fractional kernel k_fbm(t, s) = c_fbm * s^(1/2-H) * I_fbm(s, t); same
// support convention. Diverges like s^(1/2-H) as s -> 0 (square-integrable).
double k_fbm(double t, double s, const KernelSpec& spec);

// Variance of the kernel representation at time t: integral over [0, t] of
// the squared kernel. Used by calibration self-checks and verification.
double kernel_variance_sub(double t, const KernelSpec& spec);
double kernel_variance_fbm(double t, const KernelSpec& spec);

// Covariance produced by the kernel pair integral over [0, min(s,t)].
double kernel_covariance_sub(double s, double t, const KernelSpec& spec);

// Fixes c_sub so the t = 1 variance equals 2 - 2^(2H-1), then verifies the
// scaling law Var(t) = (2 - 2^(2H-1)) t^(2H) on the grid t = 0.1, ..., 1.0
// to self_check_tol (relative to t^(2H)). Scaling holds exactly for the
// continuum kernel, so grid failures expose quadrature error; calibration
// then throws CalibrationError with per-t residuals instead of proceeding.
// c_fbm is left at 0 (uncalibrated).
KernelSpec calibrate_sub(const HurstIndex& H, const QuadratureConfig& quad,
                         double self_check_tol = 1e-6);

// Fixes c_fbm so the fractional t = 1 variance equals 1, with the analogous
// t^(2H) grid self-check.
void calibrate_fbm(KernelSpec& spec, double self_check_tol = 1e-6);

// Both calibrations in one call.
KernelSpec calibrate(const HurstIndex& H, const QuadratureConfig& quad,
                     double self_check_tol = 1e-6);

// JSON round-trip: {"H":..., "c_sub":..., "c_fbm":..., "quad":{...}}.
std::string spec_to_json(const KernelSpec& spec);
KernelSpec spec_from_json(const std::string& json_text);
void save_spec(const std::string& path, const KernelSpec& spec);
KernelSpec load_spec(const std::string& path);

}  // namespace subfbm
