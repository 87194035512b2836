#include "subfbm/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace subfbm {

const char* covariance_kind_name(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::SubFbm: return "subfbm";
    case CovarianceKind::Fbm: return "fbm";
    case CovarianceKind::Bm: return "bm";
  }
  throw std::invalid_argument("unknown covariance kind enum value");
}

CovarianceKind covariance_kind_from_name(const std::string& name) {
  if (name == "subfbm") return CovarianceKind::SubFbm;
  if (name == "fbm") return CovarianceKind::Fbm;
  if (name == "bm") return CovarianceKind::Bm;
  throw std::invalid_argument("unknown covariance kind name: " + name);
}

double cov_analytic(CovarianceKind kind, const HurstIndex& H, double s, double t) {
  if (!(s >= 0.0) || !(t >= 0.0) || !(s <= 1.0) || !(t <= 1.0)) {
    throw std::invalid_argument("cov_analytic requires s, t in [0, 1]");
  }
  const double h2 = 2.0 * H.value();
  switch (kind) {
    case CovarianceKind::SubFbm:
      return std::pow(s, h2) + std::pow(t, h2) -
             0.5 * (std::pow(s + t, h2) + std::pow(std::abs(t - s), h2));
    case CovarianceKind::Fbm:
      return 0.5 * (std::pow(s, h2) + std::pow(t, h2) -
                    std::pow(std::abs(t - s), h2));
    case CovarianceKind::Bm:
      return std::min(s, t);
  }
  throw std::invalid_argument("unknown covariance kind enum value");
}

double increment_variance_lower(const HurstIndex& H, double s, double t) {
  if (!(s <= t)) throw std::invalid_argument("increment bounds require s <= t");
  const double h2 = 2.0 * H.value();
  return (2.0 - std::exp2(h2 - 1.0)) * std::pow(t - s, h2);
}

double increment_variance_upper(const HurstIndex& H, double s, double t) {
  if (!(s <= t)) throw std::invalid_argument("increment bounds require s <= t");
  return std::pow(t - s, 2.0 * H.value());
}

double increment_variance_exact(CovarianceKind kind, const HurstIndex& H,
                                double s, double t) {
  return cov_analytic(kind, H, t, t) - 2.0 * cov_analytic(kind, H, s, t) +
         cov_analytic(kind, H, s, s);
}

}  // namespace subfbm
