#include "subfbm/matrix_cache.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "subfbm/errors.hpp"

namespace subfbm {

namespace {

constexpr char kMagic[8] = {'S', 'F', 'B', 'M', 'K', 'M', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

struct Fnv1a {
  std::uint64_t hash = 1469598103934665603ULL;
  void update(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash ^= bytes[i];
      hash *= 1099511628211ULL;
    }
  }
  template <class T>
  void update_value(const T& v) {
    update(&v, sizeof(T));
  }
};

std::uint64_t payload_checksum(const KernelMatrix& m) {
  Fnv1a fnv;
  fnv.update(m.row_times.data(), m.row_times.size() * sizeof(double));
  fnv.update(m.offsets.data(), m.offsets.size() * sizeof(std::uint64_t));
  fnv.update(m.weights.data(), m.weights.size() * sizeof(double));
  return fnv.hash;
}

template <class T>
void write_value(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_value(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

std::uint32_t scheme_code(Scheme s) { return static_cast<std::uint32_t>(s); }

Scheme scheme_from_code(std::uint32_t code) {
  switch (code) {
    case 0: return Scheme::Donsker;
    case 1: return Scheme::SubFloor;
    case 2: return Scheme::SubExact;
    case 3: return Scheme::SubStep;
    case 4: return Scheme::SubWiener;
    case 5: return Scheme::Fbm;
    default: throw CacheError("matrix cache: unknown scheme code");
  }
}

}  // namespace

void save_matrix(const std::string& path, const KernelMatrix& matrix) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("matrix cache: cannot open for writing: " + tmp);
    out.write(kMagic, sizeof(kMagic));
    write_value(out, kVersion);
    write_value(out, scheme_code(matrix.scheme));
    write_value(out, static_cast<std::uint64_t>(matrix.n));
    write_value(out, static_cast<std::uint32_t>(matrix.m));
    write_value(out, std::uint32_t{0});
    write_value(out, matrix.H);
    write_value(out, matrix.prefactor);
    write_value(out, matrix.quad.abs_tol);
    write_value(out, matrix.quad.rel_tol);
    write_value(out, static_cast<std::uint64_t>(matrix.quad.max_subdivisions));
    write_value(out, static_cast<std::uint64_t>(matrix.rows()));
    write_value(out, static_cast<std::uint64_t>(matrix.weights.size()));
    write_value(out, payload_checksum(matrix));
    out.write(reinterpret_cast<const char*>(matrix.row_times.data()),
              static_cast<std::streamsize>(matrix.row_times.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(matrix.offsets.data()),
              static_cast<std::streamsize>(matrix.offsets.size() * sizeof(std::uint64_t)));
    out.write(reinterpret_cast<const char*>(matrix.weights.data()),
              static_cast<std::streamsize>(matrix.weights.size() * sizeof(double)));
    if (!out) throw CacheError("matrix cache: write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

KernelMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("matrix cache: cannot open: " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CacheError("matrix cache: bad magic: " + path);
  }
  std::uint32_t version = 0, scheme = 0, m32 = 0, reserved = 0;
  std::uint64_t n64 = 0, max_sub = 0, rows = 0, count = 0, checksum = 0;
  read_value(in, version);
  if (version != kVersion) throw CacheError("matrix cache: unsupported version");
  read_value(in, scheme);

  KernelMatrix matrix;
  matrix.scheme = scheme_from_code(scheme);
  read_value(in, n64);
  read_value(in, m32);
  read_value(in, reserved);
  read_value(in, matrix.H);
  read_value(in, matrix.prefactor);
  read_value(in, matrix.quad.abs_tol);
  read_value(in, matrix.quad.rel_tol);
  read_value(in, max_sub);
  read_value(in, rows);
  read_value(in, count);
  read_value(in, checksum);
  if (!in) throw CacheError("matrix cache: truncated header: " + path);
  matrix.n = static_cast<int>(n64);
  matrix.m = static_cast<int>(m32);
  matrix.quad.max_subdivisions = static_cast<int>(max_sub);
  matrix.quad.singularity_exponent = matrix.H - 1.5;

  matrix.row_times.resize(rows);
  matrix.offsets.resize(rows + 1);
  matrix.weights.resize(count);
  in.read(reinterpret_cast<char*>(matrix.row_times.data()),
          static_cast<std::streamsize>(rows * sizeof(double)));
  in.read(reinterpret_cast<char*>(matrix.offsets.data()),
          static_cast<std::streamsize>((rows + 1) * sizeof(std::uint64_t)));
  in.read(reinterpret_cast<char*>(matrix.weights.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw CacheError("matrix cache: truncated payload: " + path);
  if (matrix.offsets.back() != count) {
    throw CacheError("matrix cache: inconsistent offsets: " + path);
  }
  if (payload_checksum(matrix) != checksum) {
    throw CacheError("matrix cache: checksum mismatch: " + path);
  }
  return matrix;
}

std::string matrix_cache_filename(Scheme scheme, int n, int m,
                                  const KernelSpec& spec) {
  const double prefactor = scheme == Scheme::Fbm ? spec.c_fbm : spec.c_sub;
  Fnv1a fnv;
  fnv.update_value(scheme_code(scheme));
  fnv.update_value(n);
  fnv.update_value(m);
  fnv.update_value(spec.H.value());
  fnv.update_value(prefactor);
  fnv.update_value(spec.quad.abs_tol);
  fnv.update_value(spec.quad.rel_tol);
  fnv.update_value(spec.quad.max_subdivisions);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "kmat-%s-n%d-m%d-%016llx.bin",
                scheme_name(scheme), n, m,
                static_cast<unsigned long long>(fnv.hash));
  return buf;
}

KernelMatrix obtain_matrix(Scheme scheme, int n, int m, const KernelSpec& spec,
                           const std::string& cache_dir, int workers,
                           bool* cache_hit) {
  if (cache_hit) *cache_hit = false;
  auto build = [&]() -> KernelMatrix {
    switch (scheme) {
      case Scheme::SubFloor: return build_matrix_floor(n, spec, workers);
      case Scheme::SubStep: return build_matrix_stepped(m, n, spec, workers);
      case Scheme::SubWiener: return build_matrix_wiener(m, spec, workers);
      case Scheme::Fbm: return build_matrix_fbm(n, spec, workers);
      default:
        throw std::invalid_argument(
            "obtain_matrix: scheme has no cacheable matrix form");
    }
  };
  if (cache_dir.empty()) return build();

  std::filesystem::create_directories(cache_dir);
  const auto path =
      (std::filesystem::path(cache_dir) / matrix_cache_filename(scheme, n, m, spec))
          .string();
  if (std::filesystem::exists(path)) {
    KernelMatrix matrix = load_matrix(path);
    const double prefactor = scheme == Scheme::Fbm ? spec.c_fbm : spec.c_sub;
    if (matrix.scheme != scheme || matrix.n != n ||
        (scheme == Scheme::SubStep && matrix.m != m) ||
        matrix.H != spec.H.value() || matrix.prefactor != prefactor ||
        matrix.quad.abs_tol != spec.quad.abs_tol ||
        matrix.quad.rel_tol != spec.quad.rel_tol) {
      throw CacheError("matrix cache: header does not match request: " + path);
    }
    if (cache_hit) *cache_hit = true;
    return matrix;
  }
  KernelMatrix matrix = build();
  save_matrix(path, matrix);
  return matrix;
}

}  // namespace subfbm
