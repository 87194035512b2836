#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subfbm {

// Adaptive integration failed to reach the requested tolerance; carries the
// best estimate and its error bound so callers can decide to proceed or abort.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(std::string what, double best_estimate, double error_bound)
      : std::runtime_error(std::move(what)),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

// Calibration's variance self-check failed; carries per-time residuals.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(std::string what, std::vector<std::pair<double, double>> residuals)
      : std::runtime_error(std::move(what)), residuals_(std::move(residuals)) {}

  const std::vector<std::pair<double, double>>& residuals() const noexcept {
    return residuals_;
  }

 private:
  std::vector<std::pair<double, double>> residuals_;  // (t, relative residual)
};

// Matrix cache file is missing, malformed, or fails its checksum.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subfbm
