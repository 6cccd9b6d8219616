#pragma once

// Counter-based deterministic PRNG with independent substreams. Every output
// is a pure function of (seed, stream id, counter), so replaying one stream
// never depends on how the others were consumed, and replications seeded
// differently produce unrelated streams.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mlr {

constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix_mix(splitmix_mix(seed + 0x9E3779B97F4A7C15ULL) ^
                          (0xD1B54A32D192ED03ULL * (stream + 1)))) {}

  std::uint64_t next_u64() {
    ++ctr_;
    return splitmix_mix(key_ + 0x9E3779B97F4A7C15ULL * ctr_);
  }

  /// Uniform on (0, 1]; never 0, so it is safe under a logarithm.
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double next_gaussian() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t counter() const { return ctr_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

}  // namespace mlr
