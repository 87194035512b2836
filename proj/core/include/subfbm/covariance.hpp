#pragma once

#include <string>

#include "subfbm/hurst.hpp"

namespace subfbm {

// Analytic covariance families on [0, 1]^2. SubFbm is the target process of
// the kernel construction; Fbm and Bm are comparison oracles.
enum class CovarianceKind { SubFbm, Fbm, Bm };

const char* covariance_kind_name(CovarianceKind kind);
CovarianceKind covariance_kind_from_name(const std::string& name);

// SubFbm: s^2H + t^2H - ((s+t)^2H + |t-s|^2H) / 2
// Fbm:    (s^2H + t^2H - |t-s|^2H) / 2
// Bm:     min(s, t)   (H ignored)
double cov_analytic(CovarianceKind kind, const HurstIndex& H, double s, double t);

// Variance bounds for an increment over [s, t], s <= t:
//   (2 - 2^(2H-1)) (t-s)^2H  <=  E[(X(t) - X(s))^2]  <=  (t-s)^2H.
// The upper constant is max(2 - 2^(2H-1), 1) = 1 for H > 1/2.
double increment_variance_lower(const HurstIndex& H, double s, double t);
double increment_variance_upper(const HurstIndex& H, double s, double t);

// Exact increment second moment from the covariance (oracle for tests).
double increment_variance_exact(CovarianceKind kind, const HurstIndex& H,
                                double s, double t);

}  // namespace subfbm
