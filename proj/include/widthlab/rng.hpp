#pragma once

#include <cmath>
#include <cstdint>

namespace widthlab {

/// SplitMix64 stream. Hand-rolled so that seeded runs reproduce bit-identically
/// across standard libraries; splittable per task via stream().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent child stream for task `index` (restart, draw, grid point...).
  Rng stream(std::uint64_t index) const {
    std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ULL * (index + 0x632be59bd9b4e019ULL));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // modulo bias is irrelevant at our sizes
    return n == 0 ? 0 : next_u64() % n;
  }

  bool coin() { return (next_u64() & 1ULL) != 0; }

  /// Standard normal via Box-Muller (no libstdc++ distribution dependence).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Heavy-tailed symmetric draw (standard Cauchy).
  double cauchy() { return std::tan(3.14159265358979323846 * (uniform() - 0.5)); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace widthlab
