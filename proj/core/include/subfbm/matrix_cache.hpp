#pragma once

#include <string>

#include "subfbm/kernel_matrix.hpp"

namespace subfbm {

// Binary cache for built kernel matrices. Layout (little-endian):
//   magic "SFBMKMAT", u32 version, u32 scheme, u64 n, u32 m, u32 reserved,
//   f64 H, f64 prefactor, f64 abs_tol, f64 rel_tol, u64 max_subdivisions,
//   u64 rows, u64 weight_count, u64 checksum,
//   then row_times, offsets, weights as packed arrays.
// The checksum is FNV-1a 64 over the packed payload; load_matrix rejects on
// any mismatch so a cached matrix is bit-identical to a fresh build or fails.

void save_matrix(const std::string& path, const KernelMatrix& matrix);
KernelMatrix load_matrix(const std::string& path);

// Deterministic cache file name for a build request; the hash covers every
// input that influences the weights.
std::string matrix_cache_filename(Scheme scheme, int n, int m,
                                  const KernelSpec& spec);

// Loads the matrix from cache_dir if present, otherwise builds it (and saves
// it when cache_dir is nonempty). Only grid schemes (SubFloor, SubStep,
// SubWiener, Fbm) are cacheable or buildable here. cache_hit reports whether
// the cache served the matrix.
KernelMatrix obtain_matrix(Scheme scheme, int n, int m, const KernelSpec& spec,
                           const std::string& cache_dir, int workers,
                           bool* cache_hit = nullptr);

}  // namespace subfbm
