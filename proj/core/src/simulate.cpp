#include "subfbm/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "subfbm/parallel.hpp"

namespace subfbm {

namespace {

constexpr std::size_t kPathChunk = 256;  // paths per work unit

void check_grid_matrix(const KernelMatrix& matrix) {
  if (!matrix.is_grid()) {
    throw std::invalid_argument(
        "kernel_path requires a grid matrix (one row per time k/n)");
  }
}

// values[k] = <row k-1, xi>, k = 1..n; values[0] = 0.
void apply_matrix(const KernelMatrix& matrix, std::span<const double> xi,
                  double* values) {
  values[0] = 0.0;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto row = matrix.row(r);
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * xi[i];
    values[r + 1] = acc;
  }
}

}  // namespace

Path donsker_path(int n, NoiseStream& noise) {
  if (n < 1) throw std::invalid_argument("donsker_path: n must be >= 1");
  Path path;
  path.scheme = Scheme::Donsker;
  path.n = n;
  path.master_seed = noise.master_seed();
  path.stream_id = noise.stream_id();
  path.distribution = noise.distribution();
  path.values.resize(n + 1);
  path.values[0] = 0.0;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    sum += noise.next();
    path.values[k] = sum * inv_sqrt_n;
  }
  return path;
}

Path kernel_path(const KernelMatrix& matrix, std::span<const double> innovations) {
  check_grid_matrix(matrix);
  if (innovations.size() < matrix.innovations_needed()) {
    throw std::invalid_argument("kernel_path: innovation vector shorter than the matrix needs");
  }
  Path path;
  path.scheme = matrix.scheme;
  path.n = matrix.n;
  path.m = matrix.m;
  path.H = matrix.H;
  path.values.resize(matrix.n + 1);
  apply_matrix(matrix, innovations, path.values.data());
  return path;
}

Path kernel_path(const KernelMatrix& matrix, NoiseStream& noise) {
  check_grid_matrix(matrix);
  std::vector<double> xi(matrix.innovations_needed());
  noise.fill(xi);
  Path path = kernel_path(matrix, xi);
  path.master_seed = noise.master_seed();
  path.stream_id = noise.stream_id();
  path.distribution = noise.distribution();
  return path;
}

Path stepped_path(int m, int n, const KernelSpec& spec, NoiseStream& noise) {
  const KernelMatrix matrix = build_matrix_stepped(m, n, spec, 1);
  return kernel_path(matrix, noise);
}

Path wiener_discretization_path(int m, const KernelSpec& spec, NoiseStream& noise) {
  if (noise.distribution() != Distribution::StandardGaussian) {
    throw std::invalid_argument(
        "wiener_discretization_path requires Gaussian increments");
  }
  const KernelMatrix matrix = build_matrix_wiener(m, spec, 1);
  return kernel_path(matrix, noise);
}

PathEnsemble run_ensemble(const KernelMatrix& matrix, const EnsembleConfig& config) {
  check_grid_matrix(matrix);
  if (config.M < 1) throw std::invalid_argument("run_ensemble: M must be >= 1");

  PathEnsemble ens;
  ens.scheme = matrix.scheme;
  ens.n = matrix.n;
  ens.m = matrix.m;
  ens.H = matrix.H;
  ens.M = config.M;
  ens.master_seed = config.master_seed;
  ens.distribution = config.distribution;
  ens.matrix_checksum = matrix.checksum();
  ens.values.resize(static_cast<std::size_t>(config.M) * (matrix.n + 1));

  const std::size_t needed = matrix.innovations_needed();
  parallel_for_chunks(
      static_cast<std::size_t>(config.M), kPathChunk, config.workers,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<double> xi(needed);
        for (std::size_t p = begin; p < end; ++p) {
          NoiseStream stream(config.master_seed, p, config.distribution);
          stream.fill(xi);
          apply_matrix(matrix, xi,
                       ens.values.data() + p * static_cast<std::size_t>(matrix.n + 1));
        }
      });
  return ens;
}

PathEnsemble run_donsker_ensemble(int n, const EnsembleConfig& config) {
  if (n < 1) throw std::invalid_argument("run_donsker_ensemble: n must be >= 1");
  if (config.M < 1) throw std::invalid_argument("run_donsker_ensemble: M must be >= 1");

  PathEnsemble ens;
  ens.scheme = Scheme::Donsker;
  ens.n = n;
  ens.M = config.M;
  ens.master_seed = config.master_seed;
  ens.distribution = config.distribution;
  ens.values.resize(static_cast<std::size_t>(config.M) * (n + 1));

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for_chunks(
      static_cast<std::size_t>(config.M), kPathChunk, config.workers,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
          NoiseStream stream(config.master_seed, p, config.distribution);
          double* row = ens.values.data() + p * static_cast<std::size_t>(n + 1);
          row[0] = 0.0;
          double sum = 0.0;
          for (int k = 1; k <= n; ++k) {
            sum += stream.next();
            row[k] = sum * inv_sqrt_n;
          }
        }
      });
  return ens;
}

}  // namespace subfbm
