#pragma once

#include <cstdint>
#include <string_view>

namespace foilspace {

/// Deterministic PRNG used for every stochastic step in the toolkit.
///
/// All randomness flows from a single user-facing seed. Independent consumers
/// (dataset perturbation, latent sampling, subset shuffling, ...) derive their
/// own stream with `Rng(seed, "stream-name")`, so adding draws to one stage
/// never shifts the values seen by another. Uniform doubles are produced
/// directly from the 64-bit generator output, which keeps sequences identical
/// across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(mix(seed + 0x9e3779b97f4a7c15ULL)) {}

  Rng(uint64_t seed, std::string_view stream)
      : Rng(seed ^ fnv1a(stream)) {}

  uint64_t next_u64() {
    // splitmix64 step
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n > 0.
  uint64_t below(uint64_t n) { return next_u64() % n; }

  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
  }

  uint64_t state_;
};

}  // namespace foilspace
