#pragma once

#include <stdexcept>
#include <string>

namespace subfbm {

// Hurst index restricted to the long-range-dependent regime (1/2, 1); every
// kernel formula below assumes this range.
class HurstIndex {
 public:
  explicit HurstIndex(double value) : value_(value) {
    if (!(value > 0.5) || !(value < 1.0)) {
      throw std::invalid_argument("HurstIndex must lie in (0.5, 1), got " +
                                  std::to_string(value));
    }
  }

  double value() const noexcept { return value_; }

  // Exponent of the integrable endpoint singularity (x - s)^(H - 3/2).
  double singularity_exponent() const noexcept { return value_ - 1.5; }

 private:
  double value_;
};

}  // namespace subfbm
