#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "solwave/grid.hpp"
#include "solwave/symbol.hpp"

namespace solwave {

/// Symbol sampled at the grid wavenumbers, in storage order.
inline std::vector<double> symbolTable(const DispersionSymbol& s, const PeriodicGrid& g) {
  std::vector<double> t(g.size());
  for (int i = 0; i < g.size(); ++i) t[i] = s(g.wavenumber(i));
  return t;
}

/// uhat_m -> table[m] * uhat_m.
inline SpectralField applyMultiplier(std::span<const double> table, const SpectralField& u) {
  if (static_cast<int>(table.size()) != u.size())
    throw Error(ErrorCode::GridMismatch, "multiplier table does not match grid");
  std::vector<Complex> c(u.coefficients().begin(), u.coefficients().end());
  for (int i = 0; i < u.size(); ++i) c[i] *= table[i];
  return SpectralField::fromCoefficients(u.grid(), std::move(c));
}

inline SpectralField applyL(const DispersionSymbol& s, const SpectralField& u) {
  return applyMultiplier(symbolTable(s, u.grid()), u);
}

/// Spectral derivative; the Nyquist mode is dropped.
inline SpectralField ddx(const SpectralField& u) {
  const int half = u.size() / 2;
  std::vector<Complex> c(u.size());
  for (int i = 0; i < u.size(); ++i)
    c[i] = i == half ? Complex(0.0, 0.0) : Complex(0.0, u.grid().wavenumber(i)) * u.coefficients()[i];
  return SpectralField::fromCoefficients(u.grid(), std::move(c));
}

/// (nu - L)^{-1} u for a supercritical speed nu > m(0).
inline SpectralField resolvent(const DispersionSymbol& s, double nu, const SpectralField& u) {
  if (!(nu > s.mZero()))
    throw Error(ErrorCode::SubcriticalSpeed, "resolvent needs nu > m(0)");
  return u.mapCoefficients([&](double k, Complex c) { return c / (nu - s(k)); });
}

/// Sharp split into |k| <= kCut and |k| > kCut; the two parts sum to u.
inline std::pair<SpectralField, SpectralField> bandSplit(const DispersionSymbol& s,
                                                         const SpectralField& u) {
  const double k0 = s.kCut();
  std::vector<Complex> low(u.coefficients().begin(), u.coefficients().end());
  std::vector<Complex> high(u.size(), Complex(0.0, 0.0));
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u.grid().wavenumber(i)) > k0) {
      high[i] = low[i];
      low[i] = 0.0;
    }
  }
  return {SpectralField::fromCoefficients(u.grid(), std::move(low)),
          SpectralField::fromCoefficients(u.grid(), std::move(high))};
}

}  // namespace solwave
