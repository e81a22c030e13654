#pragma once

#include <cmath>
#include <cstdint>

namespace meanlab {

// The library's pseudo-random contract, fixed so that seeds embedded in
// reports replay across builds and platforms:
//
//   * generator: SplitMix64 (Steele, Lea, Flood 2014);
//   * per-trial stream: trial_seed(master, id) = mix64(master + (id+1) * GOLDEN);
//   * uniform doubles: top 53 bits of the next output, scaled by 2^-53;
//   * gaussians: Box-Muller from two consecutive uniforms.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_id) {
  return mix64(master + (trial_id + 1) * kGolden);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; one variate per call, u1 kept in (0, 1].
  double gaussian() {
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace meanlab
