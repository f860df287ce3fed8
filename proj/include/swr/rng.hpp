#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace swr {

// Seeded random source with portable output. The mt19937_64 engine is
// bit-exact across platforms; the distribution transforms below are written
// out by hand because the std::*_distribution adapters are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform draw on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;       // [0,1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double exponential(double scale) { return -scale * std::log1p(-uniform()); }

  // Unbiased integer draw in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t overflow = (max % n + 1) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (overflow == 0 || x <= max - overflow) return x % n;
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace swr
