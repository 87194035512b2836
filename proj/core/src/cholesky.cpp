#include "subfbm/cholesky.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subfbm {

std::vector<double> cholesky_factor(const std::vector<double>& matrix, int dim) {
  if (dim < 1 || matrix.size() != static_cast<std::size_t>(dim) * dim) {
    throw std::invalid_argument("cholesky_factor: dimension mismatch");
  }
  std::vector<double> L(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int j = 0; j < dim; ++j) {
    double diag = matrix[static_cast<std::size_t>(j) * dim + j];
    for (int k = 0; k < j; ++k) {
      const double v = L[static_cast<std::size_t>(j) * dim + k];
      diag -= v * v;
    }
    if (!(diag > 0.0)) {
      throw std::runtime_error("cholesky_factor: matrix not positive definite at pivot " +
                               std::to_string(j));
    }
    const double d = std::sqrt(diag);
    L[static_cast<std::size_t>(j) * dim + j] = d;
    for (int i = j + 1; i < dim; ++i) {
      double acc = matrix[static_cast<std::size_t>(i) * dim + j];
      for (int k = 0; k < j; ++k) {
        acc -= L[static_cast<std::size_t>(i) * dim + k] *
               L[static_cast<std::size_t>(j) * dim + k];
      }
      L[static_cast<std::size_t>(i) * dim + j] = acc / d;
    }
  }
  return L;
}

CholeskyOracle::CholeskyOracle(CovarianceKind kind, const HurstIndex& H,
                               std::vector<double> grid_times)
    : times_(std::move(grid_times)) {
  if (times_.empty()) {
    throw std::invalid_argument("CholeskyOracle: empty time grid");
  }
  double prev = 0.0;
  for (double t : times_) {
    if (!(t > prev)) {
      throw std::invalid_argument(
          "CholeskyOracle: grid times must be strictly increasing and > 0");
    }
    prev = t;
  }
  const int dim = static_cast<int>(times_.size());
  cov_.resize(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      cov_[static_cast<std::size_t>(i) * dim + j] =
          cov_analytic(kind, H, times_[i], times_[j]);
    }
  }
  factor_ = cholesky_factor(cov_, dim);
}

std::vector<double> CholeskyOracle::sample(NoiseStream& noise) const {
  if (noise.distribution() != Distribution::StandardGaussian) {
    throw std::invalid_argument("CholeskyOracle::sample requires Gaussian noise");
  }
  const int dim = static_cast<int>(times_.size());
  std::vector<double> z(dim);
  noise.fill(z);
  std::vector<double> out(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    double acc = 0.0;
    for (int k = 0; k <= i; ++k) {
      acc += factor_[static_cast<std::size_t>(i) * dim + k] * z[k];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> CholeskyOracle::marginal_samples(std::size_t coordinate,
                                                     int count,
                                                     std::uint64_t master_seed) const {
  if (coordinate >= times_.size()) {
    throw std::invalid_argument("CholeskyOracle: coordinate out of range");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p) {
    NoiseStream stream(master_seed, static_cast<std::uint64_t>(p),
                       Distribution::StandardGaussian);
    out[static_cast<std::size_t>(p)] = sample(stream)[coordinate];
  }
  return out;
}

}  // namespace subfbm
