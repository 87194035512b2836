#pragma once

#include <vector>

#include "subfbm/covariance.hpp"
#include "subfbm/noise.hpp"

namespace subfbm {

// In-place lower Cholesky factor of a symmetric positive definite matrix
// (row-major dim x dim; only the lower triangle of the input is read).
// Throws std::runtime_error naming the failing pivot if the matrix is not
// positive definite; for analytic covariances that signals an implementation
// bug, since they are positive semidefinite by construction.
std::vector<double> cholesky_factor(const std::vector<double>& matrix, int dim);

// Exact finite-dimensional Gaussian sampler for an analytic covariance on a
// fixed time grid: ground truth for two-sample tests against simulated paths.
// Grid times must be strictly increasing and positive (the process is pinned
// to 0 at t = 0, which would make the covariance matrix singular).
class CholeskyOracle {
 public:
  CholeskyOracle(CovarianceKind kind, const HurstIndex& H,
                 std::vector<double> grid_times);

  const std::vector<double>& grid_times() const noexcept { return times_; }
  const std::vector<double>& covariance() const noexcept { return cov_; }
  const std::vector<double>& factor() const noexcept { return factor_; }

  // One exact sample of the process at the grid times; requires a Gaussian
  // stream.
  std::vector<double> sample(NoiseStream& noise) const;

  // count samples for one grid coordinate, driven by substreams
  // (master_seed, stream_id = 0..count-1) so results match path-ensemble
  // seeding conventions.
  std::vector<double> marginal_samples(std::size_t coordinate, int count,
                                       std::uint64_t master_seed) const;

 private:
  std::vector<double> times_;
  std::vector<double> cov_;
  std::vector<double> factor_;
};

}  // namespace subfbm
