#pragma once

#include <cstdint>
#include <random>

namespace espdg {

/// Seedable, portable uniform generator: mt19937_64 with an explicit
/// bits-to-double mapping, so streams are identical across platforms and
/// standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace espdg
