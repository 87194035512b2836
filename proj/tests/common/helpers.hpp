#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "subfbm/kernel.hpp"

namespace testutil {

inline double rel_diff(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Fresh empty scratch directory under the test working directory; recreated
// on every call so tests never see a previous run's files.
inline std::filesystem::path scratch_dir(const std::string& name) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path("test_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// One calibrated spec per Hurst value, shared across test cases in a binary
// (calibration is deterministic, so sharing cannot couple tests). Each value
// is calibrated lazily on first use.
inline const subfbm::KernelSpec& shared_spec(double h) {
  auto make = [](double hv) {
    return subfbm::calibrate(subfbm::HurstIndex(hv), subfbm::QuadratureConfig{});
  };
  if (h == 0.60) {
    static const subfbm::KernelSpec spec = make(0.60);
    return spec;
  }
  if (h == 0.90) {
    static const subfbm::KernelSpec spec = make(0.90);
    return spec;
  }
  static const subfbm::KernelSpec spec = make(0.75);
  return spec;
}

}  // namespace testutil
