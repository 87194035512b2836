#include "subfbm/kernel_matrix.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "subfbm/parallel.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix layout and cache format assume a little-endian host");

namespace subfbm {

namespace {

constexpr std::size_t kRowChunk = 8;  // rows per work unit; worker-independent

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 1469598103934665603ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ULL;
  }
  return hash;
}

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("grid resolution n must be >= 1");
}

void check_m(int m) {
  if (m < 1) throw std::invalid_argument("partition resolution m must be >= 1");
}

// Cell integral sqrt(n) * integral over [a, b] of kernel(u) du.
// kind: 0 = interior cell, 1 = first cell (left edge exponent q applies),
// 2 = cell whose right edge touches the kernel's time argument.
template <class K>
double cell_integral(K&& kernel, double a, double b, int kind, double q,
                     const QuadratureConfig& cfg, double sqrt_n) {
  if (b <= a) return 0.0;
  double v = 0.0;
  if (kind == 1) {
    v = integrate_left_power(kernel, b, q, cfg).value;
  } else if (kind == 2) {
    // Kernel value is Holder at the right edge; grade panels toward b.
    double cuts[6];
    const double w = b - a;
    for (int j = 0; j < 6; ++j) cuts[j] = b - w * std::pow(0.5, j + 1);
    v = integrate_adaptive(kernel, a, b, cfg, cuts).value;
  } else {
    v = integrate_adaptive(kernel, a, b, cfg).value;
  }
  return sqrt_n * v;
}

struct RowPlan {
  double time = 0.0;
  std::size_t length = 0;
};

// Shared builder for the cell-averaged schemes: every row integrates the
// kernel section at its own time over the walk cells.
template <class KernelAt>
KernelMatrix build_cell_averaged(Scheme scheme, int n,
                                 const std::vector<RowPlan>& plans,
                                 const KernelSpec& spec, double prefactor,
                                 double left_edge_q, KernelAt&& kernel_at,
                                 int workers) {
  KernelMatrix mat;
  mat.scheme = scheme;
  mat.n = n;
  mat.H = spec.H.value();
  mat.prefactor = prefactor;
  mat.quad = spec.quad;
  mat.row_times.resize(plans.size());
  mat.offsets.resize(plans.size() + 1);
  mat.offsets[0] = 0;
  for (std::size_t r = 0; r < plans.size(); ++r) {
    mat.row_times[r] = plans[r].time;
    mat.offsets[r + 1] = mat.offsets[r] + plans[r].length;
  }
  mat.weights.assign(mat.offsets.back(), 0.0);

  KernelSpec inner_spec = spec;
  inner_spec.quad = spec.quad.inner();
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  parallel_for_chunks(
      plans.size(), kRowChunk, workers,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          const double t = plans[r].time;
          const std::size_t len = plans[r].length;
          double* out = mat.weights.data() + mat.offsets[r];
          auto kernel = [&](double u) { return kernel_at(t, u, inner_spec); };
          for (std::size_t i = 1; i <= len; ++i) {
            const double a = static_cast<double>(i - 1) / n;
            const double b = static_cast<double>(i) / n;
            int kind = 0;
            if (i == 1) {
              kind = 1;
            } else if (i == len && t - b < (b - a)) {
              kind = 2;
            }
            out[i - 1] = cell_integral(kernel, a, b, kind, left_edge_q,
                                       spec.quad, sqrt_n);
          }
        }
      });
  return mat;
}

void require_calibrated_sub(const KernelSpec& spec) {
  if (!(spec.c_sub > 0.0)) {
    throw std::invalid_argument("kernel spec is not calibrated (c_sub <= 0)");
  }
}

void require_calibrated_fbm(const KernelSpec& spec) {
  if (!(spec.c_fbm > 0.0)) {
    throw std::invalid_argument("kernel spec is not calibrated (c_fbm <= 0)");
  }
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Donsker: return "donsker";
    case Scheme::SubFloor: return "sub-floor";
    case Scheme::SubExact: return "sub-exact";
    case Scheme::SubStep: return "sub-step";
    case Scheme::SubWiener: return "sub-wiener";
    case Scheme::Fbm: return "fbm";
  }
  throw std::invalid_argument("unknown scheme enum value");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "donsker") return Scheme::Donsker;
  if (name == "sub-floor") return Scheme::SubFloor;
  if (name == "sub-exact") return Scheme::SubExact;
  if (name == "sub-step") return Scheme::SubStep;
  if (name == "sub-wiener") return Scheme::SubWiener;
  if (name == "fbm") return Scheme::Fbm;
  throw std::invalid_argument("unknown scheme name: " + name);
}

int floor_index(int n, double t) {
  const int k = static_cast<int>(std::floor(n * t + 1e-9));
  return std::max(0, std::min(k, n));
}

double interval_overlap(double a1, double a2, double b1, double b2) {
  if (a2 < a1 || b2 < b1) {
    throw std::invalid_argument("interval_overlap: interval endpoints out of order");
  }
  return std::max(0.0, std::min(a2, b2) - std::max(a1, b1));
}

std::span<const double> KernelMatrix::row(std::size_t r) const {
  return {weights.data() + offsets[r], weights.data() + offsets[r + 1]};
}

std::size_t KernelMatrix::row_length(std::size_t r) const {
  return offsets[r + 1] - offsets[r];
}

bool KernelMatrix::is_grid() const noexcept {
  if (static_cast<int>(rows()) != n) return false;
  for (std::size_t r = 0; r < rows(); ++r) {
    if (row_times[r] != static_cast<double>(r + 1) / n) return false;
  }
  return true;
}

std::size_t KernelMatrix::innovations_needed() const noexcept {
  std::size_t needed = 0;
  for (std::size_t r = 0; r < rows(); ++r) {
    needed = std::max(needed, row_length(r));
  }
  return needed;
}

double KernelMatrix::row_sum_squares(std::size_t r) const {
  double s = 0.0;
  for (double w : row(r)) s += w * w;
  return s;
}

std::uint64_t KernelMatrix::checksum() const noexcept {
  return fnv1a64(weights.data(), weights.size() * sizeof(double));
}

KernelMatrix build_matrix_floor(int n, const KernelSpec& spec, int workers) {
  check_n(n);
  require_calibrated_sub(spec);
  std::vector<RowPlan> plans(n);
  for (int k = 1; k <= n; ++k) {
    plans[k - 1] = {static_cast<double>(k) / n, static_cast<std::size_t>(k)};
  }
  return build_cell_averaged(
      Scheme::SubFloor, n, plans, spec, spec.c_sub, spec.H.value() - 0.5,
      [](double t, double u, const KernelSpec& s) { return k_sub(t, u, s); },
      workers);
}

KernelMatrix build_matrix_exact(std::span<const double> times, int n,
                                const KernelSpec& spec, int workers) {
  check_n(n);
  require_calibrated_sub(spec);
  if (times.empty()) {
    throw std::invalid_argument("build_matrix_exact: empty time list");
  }
  std::vector<RowPlan> plans(times.size());
  for (std::size_t r = 0; r < times.size(); ++r) {
    const double t = times[r];
    if (!(t > 0.0) || !(t <= 1.0)) {
      throw std::invalid_argument("build_matrix_exact: times must lie in (0, 1]");
    }
    plans[r] = {t, static_cast<std::size_t>(floor_index(n, t))};
  }
  auto mat = build_cell_averaged(
      Scheme::SubExact, n, plans, spec, spec.c_sub, spec.H.value() - 0.5,
      [](double t, double u, const KernelSpec& s) { return k_sub(t, u, s); },
      workers);
  return mat;
}

KernelMatrix build_matrix_fbm(int n, const KernelSpec& spec, int workers) {
  check_n(n);
  require_calibrated_fbm(spec);
  std::vector<RowPlan> plans(n);
  for (int k = 1; k <= n; ++k) {
    plans[k - 1] = {static_cast<double>(k) / n, static_cast<std::size_t>(k)};
  }
  return build_cell_averaged(
      Scheme::Fbm, n, plans, spec, spec.c_fbm, 0.5 - spec.H.value(),
      [](double t, double u, const KernelSpec& s) { return k_fbm(t, u, s); },
      workers);
}

StepKernel build_step_kernel(int m, double t, const KernelSpec& spec) {
  check_m(m);
  require_calibrated_sub(spec);
  if (!(t > 0.0) || !(t <= 1.0)) {
    throw std::invalid_argument("build_step_kernel: t must lie in (0, 1]");
  }
  StepKernel step;
  step.m = m;
  step.t = t;
  step.values.resize(m);
  for (int i = 1; i <= m; ++i) {
    step.values[i - 1] = k_sub(t, static_cast<double>(i - 1) / m, spec);
  }
  return step;
}

double StepKernel::value_at(double u) const {
  if (u < 0.0 || u >= 1.0) return 0.0;
  const int i = std::min(static_cast<int>(u * m), m - 1);
  return values[i];
}

std::vector<double> exact_time_row(double t, int n, const KernelSpec& spec) {
  const double times[] = {t};
  auto mat = build_matrix_exact(times, n, spec, 1);
  auto r = mat.row(0);
  return {r.begin(), r.end()};
}

SteppedWeights stepped_weights(int m, int n, double t, const KernelSpec& spec) {
  check_m(m);
  check_n(n);
  require_calibrated_sub(spec);
  if (!(t > 0.0) || !(t <= 1.0)) {
    throw std::invalid_argument("stepped_weights: t must lie in (0, 1]");
  }

  std::vector<double> v(m + 1, 0.0);  // v[j] = K(t, t_{j-1}), j = 1..m
  double sum_sq = 0.0;
  for (int j = 1; j <= m; ++j) {
    v[j] = k_sub(t, static_cast<double>(j - 1) / m, spec);
    sum_sq += v[j] * v[j];
  }

  // Last block whose left endpoint lies strictly below t (its weight may
  // still be zero when t <= 1/m): j_star = ceil(m t), with on-grid detection.
  const int mt_floor = floor_index(m, t);
  const bool aligned = std::abs(m * t - mt_floor) < 1e-9;
  const int j_star = std::min(m, std::max(1, aligned ? mt_floor : mt_floor + 1));

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  SteppedWeights sw;
  sw.m = m;
  sw.n = n;
  sw.t = t;
  sw.sum_sq_step_values_ = sum_sq;

  // Block form: walk step k gets the weight of the block (j-1)/m..j/m whose
  // walk-index range floor(n(j-1)/m) < k <= floor(nj/m) contains it. Exact
  // integer arithmetic; partition points are rational.
  const std::size_t block_len =
      static_cast<std::size_t>((static_cast<long long>(n) * j_star) / m);
  sw.block.assign(block_len, 0.0);
  for (int j = 1; j <= j_star; ++j) {
    const auto lo = (static_cast<long long>(n) * (j - 1)) / m;  // exclusive
    const auto hi = (static_cast<long long>(n) * j) / m;        // inclusive
    for (long long k = lo + 1; k <= hi; ++k) {
      sw.block[static_cast<std::size_t>(k - 1)] = v[j] * inv_sqrt_n;
    }
  }

  // Overlap form: walk cell k weighted by the Lebesgue overlap with each
  // partition cell; cells 1..floor(nt).
  const std::size_t overlap_len = static_cast<std::size_t>(floor_index(n, t));
  sw.overlap.assign(overlap_len, 0.0);
  for (std::size_t k = 1; k <= overlap_len; ++k) {
    const double a = static_cast<double>(k - 1) / n;
    const double b = static_cast<double>(k) / n;
    const long long j_lo = (static_cast<long long>(m) * (k - 1)) / n + 1;
    double acc = 0.0;
    for (long long j = j_lo; j <= m; ++j) {
      const double lo = static_cast<double>(j - 1) / m;
      if (lo >= b) break;
      acc += v[j] * interval_overlap(a, b, lo, static_cast<double>(j) / m);
    }
    sw.overlap[k - 1] = sqrt_n * acc;
  }
  return sw;
}

double SteppedWeights::mean_square_gap() const {
  const std::size_t len = std::max(block.size(), overlap.size());
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double x = i < block.size() ? block[i] : 0.0;
    const double y = i < overlap.size() ? overlap[i] : 0.0;
    s += (x - y) * (x - y);
  }
  return s;
}

double SteppedWeights::mean_square_bound() const {
  return 4.0 * sum_sq_step_values_ / n;
}

KernelMatrix build_matrix_stepped(int m, int n, const KernelSpec& spec,
                                  int workers) {
  check_m(m);
  check_n(n);
  require_calibrated_sub(spec);

  KernelMatrix mat;
  mat.scheme = Scheme::SubStep;
  mat.n = n;
  mat.m = m;
  mat.H = spec.H.value();
  mat.prefactor = spec.c_sub;
  mat.quad = spec.quad;
  mat.row_times.resize(n);
  mat.offsets.resize(n + 1);
  mat.offsets[0] = 0;
  for (int k = 1; k <= n; ++k) {
    mat.row_times[k - 1] = static_cast<double>(k) / n;
    const long long j_star =
        (static_cast<long long>(m) * k + n - 1) / n;  // ceil(mk/n)
    const long long len = (static_cast<long long>(n) * j_star) / m;
    mat.offsets[k] = mat.offsets[k - 1] + static_cast<std::uint64_t>(len);
  }
  mat.weights.assign(mat.offsets.back(), 0.0);

  parallel_for_chunks(
      static_cast<std::size_t>(n), kRowChunk, workers,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          const double t = mat.row_times[r];
          auto sw = stepped_weights(m, n, t, spec);
          double* out = mat.weights.data() + mat.offsets[r];
          std::memcpy(out, sw.block.data(), sw.block.size() * sizeof(double));
        }
      });
  return mat;
}

KernelMatrix build_matrix_wiener(int m, const KernelSpec& spec, int workers) {
  check_m(m);
  require_calibrated_sub(spec);

  KernelMatrix mat;
  mat.scheme = Scheme::SubWiener;
  mat.n = m;
  mat.m = m;
  mat.H = spec.H.value();
  mat.prefactor = spec.c_sub;
  mat.quad = spec.quad;
  mat.row_times.resize(m);
  mat.offsets.resize(m + 1);
  mat.offsets[0] = 0;
  for (int k = 1; k <= m; ++k) {
    mat.row_times[k - 1] = static_cast<double>(k) / m;
    mat.offsets[k] = mat.offsets[k - 1] + static_cast<std::uint64_t>(k);
  }
  mat.weights.assign(mat.offsets.back(), 0.0);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));

  parallel_for_chunks(
      static_cast<std::size_t>(m), kRowChunk, workers,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          const double t = mat.row_times[r];
          double* out = mat.weights.data() + mat.offsets[r];
          for (std::size_t i = 1; i <= r + 1; ++i) {
            out[i - 1] =
                k_sub(t, static_cast<double>(i - 1) / m, spec) * inv_sqrt_m;
          }
        }
      });
  return mat;
}

}  // namespace subfbm
