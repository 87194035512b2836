#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subfbm/kernel.hpp"

namespace subfbm {

// Path construction schemes. Donsker is the plain rescaled walk; SubFloor is
// the main cell-averaged kernel scheme; SubExact evaluates the kernel at
// requested (possibly off-grid) times; SubStep drives the piecewise-constant
// kernel with walk block increments; SubWiener drives it with exact Gaussian
// increments; Fbm is the fractional comparison scheme.
enum class Scheme { Donsker, SubFloor, SubExact, SubStep, SubWiener, Fbm };

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

// floor(n * t) with a one-sided nudge so times intended to lie on the grid
// (t = k/n up to rounding) resolve to k rather than k - 1.
int floor_index(int n, double t);

// Length of [a1, a2) intersected with [b1, b2).
double interval_overlap(double a1, double a2, double b1, double b2);

// Lower-triangular weight matrix: row r holds A[r][i] so that a path value is
// the dot product of a row with the i.i.d. innovation vector. Rows are packed
// contiguously; row r occupies weights[offsets[r] .. offsets[r + 1]).
// SubStep rows may extend past the diagonal: a block increment straddling the
// row time pulls in walk steps beyond it. All other schemes are triangular.
struct KernelMatrix {
  Scheme scheme = Scheme::SubFloor;
  int n = 0;  // driving-walk resolution (equals m for SubWiener)
  int m = 0;  // partition resolution; 0 unless SubStep/SubWiener
  double H = 0.0;
  double prefactor = 0.0;  // c_sub (or c_fbm for the Fbm scheme) used to build
  QuadratureConfig quad;   // build-time tolerances (cache key component)
  std::vector<double> row_times;
  std::vector<std::uint64_t> offsets;  // size rows() + 1
  std::vector<double> weights;

  std::size_t rows() const noexcept { return row_times.size(); }
  std::span<const double> row(std::size_t r) const;
  std::size_t row_length(std::size_t r) const;
  // True when row r corresponds to time (r + 1) / n for every r and rows == n.
  bool is_grid() const noexcept;
  // Largest innovation index any row consumes.
  std::size_t innovations_needed() const noexcept;
  double row_sum_squares(std::size_t r) const;
  // FNV-1a 64 over the packed weight bytes.
  std::uint64_t checksum() const noexcept;
};

// Main scheme: A[k][i] = sqrt(n) * integral over [(i-1)/n, i/n] of
// k_sub(k/n, u) du, for 1 <= i <= k <= n. The first cell and the cell
// touching the diagonal get singularity-aware treatment.
KernelMatrix build_matrix_floor(int n, const KernelSpec& spec, int workers = 1);

// Same cell integrals but with the kernel evaluated at the exact requested
// times instead of their grid floors; row for time t has floor(n t) cells.
KernelMatrix build_matrix_exact(std::span<const double> times, int n,
                                const KernelSpec& spec, int workers = 1);

// Fractional comparison scheme over k_fbm.
KernelMatrix build_matrix_fbm(int n, const KernelSpec& spec, int workers = 1);

// Piecewise-constant kernel driven by walk block increments, rows at grid
// times k/n: A[k][i] = K(k/n, t_{j-1}) / sqrt(n) where block j covers walk
// step i.
KernelMatrix build_matrix_stepped(int m, int n, const KernelSpec& spec,
                                  int workers = 1);

// Piecewise-constant kernel driven by exact Gaussian increments on its own
// partition: rows at k/m with A[k][i] = K(k/m, (i-1)/m) / sqrt(m).
KernelMatrix build_matrix_wiener(int m, const KernelSpec& spec, int workers = 1);

// Piecewise-constant section K^m(t, .): values[i-1] = k_sub(t, (i-1)/m) on
// cell [(i-1)/m, i/m). The cell straddling t keeps its left-endpoint value on
// the whole cell (support extends past t to the cell's right edge).
struct StepKernel {
  int m = 0;
  double t = 0.0;
  std::vector<double> values;

  double value_at(double u) const;
};

StepKernel build_step_kernel(int m, double t, const KernelSpec& spec);

// Single weight row for an exact (possibly off-grid) time; cells 1..floor(nt).
std::vector<double> exact_time_row(double t, int n, const KernelSpec& spec);

// The two discretizations of the stepped construction at one time: `block`
// assigns each walk step the weight of the block containing it; `overlap`
// weights each walk cell by the Lebesgue overlap with the partition cells
// (cells 1..floor(nt)). They differ only at walk cells straddling partition
// boundaries; the squared distance between the weight vectors is the exact
// mean-square gap between the two path forms and is bounded by
// (4/n) * sum_i K(t, t_{i-1})^2.
struct SteppedWeights {
  int m = 0;
  int n = 0;
  double t = 0.0;
  std::vector<double> block;
  std::vector<double> overlap;

  double mean_square_gap() const;
  double mean_square_bound() const;  // (4/n) * sum of squared block values

 private:
  friend SteppedWeights stepped_weights(int m, int n, double t,
                                        const KernelSpec& spec);
  double sum_sq_step_values_ = 0.0;
};

SteppedWeights stepped_weights(int m, int n, double t, const KernelSpec& spec);

}  // namespace subfbm
