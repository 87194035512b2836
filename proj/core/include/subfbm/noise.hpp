#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace subfbm {

// Innovation law: both have mean 0 and variance 1.
enum class Distribution { Rademacher, StandardGaussian };

const char* distribution_name(Distribution d);
Distribution distribution_from_name(const std::string& name);

// Seedable i.i.d. innovation source. Streams are keyed by (master_seed,
// stream_id) through a splitmix64-style bijective mixer, so any path's draws
// are a pure function of its key: independent of scheduling, worker count,
// and draw interleaving across streams. Identical keys reproduce identical
// draws bit-exactly.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t stream_id,
              Distribution distribution);

  Distribution distribution() const noexcept { return distribution_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Next innovation: +/-1 for Rademacher, standard normal for Gaussian.
  double next();
  void fill(std::span<double> out);

  // Next uniform draw on (0, 1); exposed for samplers that need raw uniforms.
  double next_uniform();

 private:
  std::uint64_t next_u64();

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  Distribution distribution_;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace subfbm
