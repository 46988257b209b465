#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace ritz {

/// Seeded generator for uniform doubles. The raw engine is std::mt19937_64,
/// whose output sequence is fixed by the standard; doubles are produced by
/// explicit bit manipulation instead of std::uniform_real_distribution, which
/// is implementation-defined. Artifacts derived from a seed are therefore
/// bit-reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on (-bound, bound).
  double symmetric(double bound) { return uniform(-bound, bound); }

  /// Standard normal via Box-Muller; consumes two engine draws.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Unbiased integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = (max / n) * n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ritz
