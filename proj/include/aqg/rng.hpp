#pragma once

#include <cmath>
#include <cstdint>

#include "aqg/scalar.hpp"

namespace aqg {

/// splitmix64-based generator. Self-contained so that seeded reports are
/// byte-identical across standard library implementations.
class rng {
 public:
  explicit rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  uint64_t below(uint64_t n) { return next_u64() % n; }

  /// standard normal via Box-Muller
  double gaussian() {
    double u1 = uniform(), u2 = uniform();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  cd complex_gaussian() { return {gaussian(), gaussian()}; }

 private:
  uint64_t state_;
};

}  // namespace aqg
