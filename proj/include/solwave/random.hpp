#pragma once

// Counter-based SplitMix64: draw i is mix(seed + (i + 1) * 0x9e3779b97f4a7c15),
// so a stream is fully determined by its 64-bit seed. Normals use Box-Muller.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace solwave {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (spare_) {
      spare_ = false;
      return saved_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * std::numbers::pi * uniform();
    saved_ = r * std::sin(a);
    spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double saved_ = 0.0;
  bool spare_ = false;
};

}  // namespace solwave
