#pragma once

#include <cmath>
#include <cstdint>

namespace dvfsim {

/// Deterministic 64-bit mixer/generator (splitmix64). Used everywhere a
/// reproducible stream is needed so results do not depend on the standard
/// library's distribution implementations.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1).
  double next_double() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, m). m must be > 0.
  std::uint64_t bounded(std::uint64_t m) { return next() % m; }

  /// Standard normal deviate via Box-Muller.
  double next_normal() {
    const double u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }
};

/// Combine two seeds into one well-mixed stream seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (b * 0xff51afd7ed558ccdULL + 0x9e3779b97f4a7c15ULL));
  return g.next();
}

}  // namespace dvfsim
