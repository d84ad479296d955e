#pragma once

#include <cstdint>

#include "anv/common.hpp"

namespace anv {

/// Counter-based SplitMix64. Output i of stream s is a pure function of
/// (seed, s, i), so substreams can be evaluated independently and in any
/// order while staying bit-reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(seed ^ (stream * 0xb5ad4eceda1ce2a9ULL + 0x2545f4914f6cdd1dULL)) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return mix(base_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace anv
