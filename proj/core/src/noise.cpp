#include "subfbm/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subfbm {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer: a strong bijective mixer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

const char* distribution_name(Distribution d) {
  switch (d) {
    case Distribution::Rademacher: return "rademacher";
    case Distribution::StandardGaussian: return "gaussian";
  }
  throw std::invalid_argument("unknown distribution enum value");
}

Distribution distribution_from_name(const std::string& name) {
  if (name == "rademacher") return Distribution::Rademacher;
  if (name == "gaussian") return Distribution::StandardGaussian;
  throw std::invalid_argument("unknown distribution name: " + name);
}

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t stream_id,
                         Distribution distribution)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      state_(mix64(master_seed ^ mix64(stream_id * kGolden + 1))),
      distribution_(distribution) {}

std::uint64_t NoiseStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double NoiseStream::next_uniform() {
  // 53-bit mantissa, shifted into (0, 1]; never 0 so log() is safe.
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseStream::next() {
  if (distribution_ == Distribution::Rademacher) {
    return (next_u64() >> 63) ? 1.0 : -1.0;
  }
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // Box-Muller; the pair is cached so draws come in deterministic order.
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(angle);
  has_cached_gaussian_ = true;
  return r * std::cos(angle);
}

void NoiseStream::fill(std::span<double> out) {
  for (double& x : out) x = next();
}

}  // namespace subfbm
