#pragma once

#include <cstdint>
#include <random>

namespace aaps {

/// Pseudo-random source owned by a single chain.
///
/// Wraps a 64-bit Mersenne twister. Every chain gets its own instance seeded
/// through derive_seed(), so chains never share mutable RNG state.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return unit_(engine_); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return normal_(engine_); }

  /// Uniform integer on the closed range [lo, hi].
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  std::uint64_t next_u64() { return engine_(); }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Small counter-based generator for per-iteration decision streams.
/// Cheap to construct, unlike the Mersenne twister.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Deterministic seed for stream `index` of a run with seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace aaps
