#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "solwave/grid.hpp"

namespace solwave::testing {

/// Real field with Gaussian coefficients damped like exp(-(m/width)^2), all
/// modes inside the dealiasing band.
inline SpectralField randomField(const PeriodicGrid& g, std::mt19937_64& rng, double width = 6.0,
                                 double scale = 1.0) {
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> c(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const int m = g.mode(i);
    if (m < 0 || std::abs(m) > g.size() / 3) continue;
    const double damp = scale * std::exp(-std::pow(m / width, 2));
    c[i] = m == 0 ? std::complex<double>(normal(rng) * damp, 0.0)
                  : std::complex<double>(normal(rng) * damp, normal(rng) * damp);
  }
  for (int i = 0; i < g.size(); ++i) {
    const int m = g.mode(i);
    if (m < 0 && -m <= g.size() / 3) c[i] = std::conj(c[g.index(-m)]);
  }
  return SpectralField::fromCoefficients(g, std::move(c));
}

inline double relErr(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace solwave::testing
