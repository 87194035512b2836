#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "subfbm/kernel_matrix.hpp"
#include "subfbm/noise.hpp"

namespace subfbm {

// One sampled path on the grid {k/n : k = 0..n}; values[0] == 0 always.
struct Path {
  Scheme scheme = Scheme::Donsker;
  int n = 0;
  int m = 0;            // partition resolution for stepped schemes
  double H = 0.0;       // 0 for the Donsker walk (no Hurst parameter)
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  Distribution distribution = Distribution::Rademacher;
  std::vector<double> values;  // size n + 1
};

// M independent paths with common scheme and grid; path p is driven by the
// noise substream (master_seed, p). Stored row-major, one path per row.
struct PathEnsemble {
  Scheme scheme = Scheme::SubFloor;
  int n = 0;
  int m = 0;
  double H = 0.0;
  int M = 0;
  std::uint64_t master_seed = 0;
  Distribution distribution = Distribution::Rademacher;
  std::uint64_t matrix_checksum = 0;  // 0 for Donsker ensembles
  std::vector<double> values;         // M * (n + 1)

  std::span<const double> path(int p) const {
    return {values.data() + static_cast<std::size_t>(p) * (n + 1),
            static_cast<std::size_t>(n + 1)};
  }
  double value(int p, int k) const { return path(p)[static_cast<std::size_t>(k)]; }
};

// Rescaled random walk: values[k] = (xi_1 + ... + xi_k) / sqrt(n).
Path donsker_path(int n, NoiseStream& noise);

// Triangular matrix-noise product: values[k] = sum_i A[k][i] xi_i. One noise
// vector drives all time points of a path (the weights vary with the row, so
// this is not a running sum). Requires a grid matrix (rows at k/n, k = 1..n).
Path kernel_path(const KernelMatrix& matrix, NoiseStream& noise);

// Same product over an explicit innovation vector (linearity and consistency
// hooks for tests); innovations.size() must cover matrix.innovations_needed().
Path kernel_path(const KernelMatrix& matrix, std::span<const double> innovations);

// Piecewise-constant kernel driven by walk block increments (block form).
Path stepped_path(int m, int n, const KernelSpec& spec, NoiseStream& noise);

// Piecewise-constant kernel driven by exact Gaussian increments of variance
// 1/m: the large-n limit object of the stepped construction at fixed m.
// Requires a StandardGaussian stream.
Path wiener_discretization_path(int m, const KernelSpec& spec, NoiseStream& noise);

struct EnsembleConfig {
  int M = 1;
  std::uint64_t master_seed = 0;
  Distribution distribution = Distribution::Rademacher;
  int workers = 1;
};

// M independent paths of the matrix's scheme. Deterministic for fixed
// (master_seed, M, matrix) at any worker count: each path consumes only its
// own keyed substream and writes only its own row.
PathEnsemble run_ensemble(const KernelMatrix& matrix, const EnsembleConfig& config);

// Donsker-walk ensemble (no matrix).
PathEnsemble run_donsker_ensemble(int n, const EnsembleConfig& config);

}  // namespace subfbm
