#pragma once

// Long-wave scaling u(x) = mu^alpha w(mu^beta x), the KdV ground state of the
// Whitham long-wave limit, and translation-aware distances between fields.

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "solwave/error.hpp"
#include "solwave/grid.hpp"

namespace solwave {

struct ScalingExponents {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// alpha = 2j/(4j+1-p), beta = (p-1)/(4j+1-p), gamma = 2 j beta.
inline ScalingExponents exponents(int jStar, double p) {
  const double window = 4.0 * jStar + 1.0;
  if (jStar < 1 || !(p >= 2.0 && p < window)) {
    std::ostringstream msg;
    msg << "p=" << p << " outside [2, " << window << ") for jStar=" << jStar;
    throw Error(ErrorCode::ExponentWindow, msg.str());
  }
  const double denom = window - p;
  ScalingExponents e;
  e.alpha = 2.0 * jStar / denom;
  e.beta = (p - 1.0) / denom;
  e.gamma = 2.0 * jStar * e.beta;
  return e;
}

/// Max |u| over the outer 10% of the period on each side.
inline double tailCheck(const SpectralField& u) { return maxAbsOutside(u, 0.4 * u.grid().period()); }

/// mu^alpha w(mu^beta x): same samples on the stretched period P / mu^beta.
inline SpectralField scaleUp(double mu, const ScalingExponents& e, const SpectralField& w) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "scaleUp needs mu > 0");
  const PeriodicGrid g(w.grid().period() * std::pow(mu, -e.beta), w.size());
  std::vector<double> s(w.samples().begin(), w.samples().end());
  const double amp = std::pow(mu, e.alpha);
  for (auto& v : s) v *= amp;
  return SpectralField::fromSamples(g, std::move(s));
}

/// Inverse of scaleUp: mu^{-alpha} u(mu^{-beta} y) on the period P mu^beta.
inline SpectralField scaleDown(double mu, const ScalingExponents& e, const SpectralField& u) {
  return scaleUp(1.0 / mu, e, u);
}

/// scaleUp followed by resampling onto a target grid (tail-gated).
inline SpectralField scaleUp(double mu, const ScalingExponents& e, const SpectralField& w,
                             const PeriodicGrid& target, double tailTol = 1e-10) {
  const SpectralField up = scaleUp(mu, e, w);
  if (up.grid().sameAs(target)) return up;
  return resampleToGrid(up, target, tailTol);
}

inline SpectralField scaleDown(double mu, const ScalingExponents& e, const SpectralField& u,
                               const PeriodicGrid& target, double tailTol = 1e-10) {
  return scaleUp(1.0 / mu, e, u, target, tailTol);
}

namespace kdv {

/// (3/2)^{2/3}, peak of the KdV ground state.
inline double amplitude() { return std::cbrt(2.25); }
/// (3/2)^{1/3}, inverse half-width.
inline double wavenumber() { return std::cbrt(1.5); }
/// (2/3)^{1/3}, the Lagrange multiplier nu_lw.
inline double speed() { return std::cbrt(2.0 / 3.0); }
/// -(4/15)(3/2)^{5/3}, the reduced energy of the ground state.
inline double energy() { return -(4.0 / 15.0) * std::pow(1.5, 5.0 / 3.0); }

}  // namespace kdv

/// w(x) = (3/2)^{2/3} sech^2((3/2)^{1/3} x), which solves w''/6 - nu w + w^2 = 0
/// with nu = (2/3)^{1/3} and has Q(w) = 1.
inline SpectralField kdvSoliton(const PeriodicGrid& grid) {
  const double a = kdv::amplitude(), b = kdv::wavenumber();
  auto w = SpectralField::sample(grid, [&](double x) {
    const double s = 1.0 / std::cosh(b * x);
    return a * s * s;
  });
  if (tailCheck(w) >= 1e-12)
    throw Error(ErrorCode::TailTooLarge, "grid too short for the KdV soliton");
  return w;
}

inline double kdvSpeed() { return kdv::speed(); }

struct OrbitDistance {
  double distance = 0.0;
  /// y minimising ||u - v(. + y)||, wrapped into [-P/2, P/2).
  double shift = 0.0;
};

namespace detail {

// sum_m w_m |uhat_m - vhat_m e^{i k_m y}|^2 and its first two derivatives in y.
struct ShiftedGap {
  const SpectralField& u;
  const SpectralField& v;
  std::vector<double> weight;

  ShiftedGap(const SpectralField& a, const SpectralField& b, double s) : u(a), v(b), weight(a.size()) {
    for (int i = 0; i < a.size(); ++i) {
      const double k = a.grid().wavenumber(i);
      weight[i] = std::pow(1.0 + k * k, s);
    }
  }

  double value(double y) const {
    const int half = u.size() / 2;
    double sum = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const double k = u.grid().wavenumber(i);
      const Complex shiftedV = i == half ? Complex(v.coefficients()[i].real() * std::cos(k * y), 0.0)
                                         : v.coefficients()[i] * std::polar(1.0, k * y);
      sum += weight[i] * std::norm(u.coefficients()[i] - shiftedV);
    }
    return sum;
  }

  // C(y) = Re sum w u conj(v e^{iky}); value = |u|^2 + |v|^2 - 2 C.
  std::pair<double, double> correlationDerivatives(double y) const {
    double d1 = 0.0, d2 = 0.0;
    const int half = u.size() / 2;
    for (int i = 0; i < u.size(); ++i) {
      if (i == half) continue;
      const double k = u.grid().wavenumber(i);
      const Complex a = weight[i] * u.coefficients()[i] * std::conj(v.coefficients()[i]) *
                        std::polar(1.0, -k * y);
      d1 += (Complex(0.0, -k) * a).real();
      d2 += (-k * k * a).real();
    }
    return {d1, d2};
  }
};

inline double wrapShift(double y, double period) {
  y = std::fmod(y + 0.5 * period, period);
  if (y < 0.0) y += period;
  return y - 0.5 * period;
}

}  // namespace detail

/// min over y of ||u - v(. + y)||_{H^s}. Coarse maximisation of the
/// cross-correlation on the grid shifts (one inverse transform), golden-section
/// refinement inside the neighbouring cells, then Newton polishing on the
/// correlation derivative.
inline OrbitDistance orbitDistance(const SpectralField& u, const SpectralField& v, double s = 0.0) {
  u.requireSameGrid(v);
  const auto& g = u.grid();
  const detail::ShiftedGap gap(u, v, s);

  // C(y) for y = x_j, up to the factor sqrt(P): coefficients conj(w u conj v).
  std::vector<Complex> corr(u.size());
  for (int i = 0; i < u.size(); ++i)
    corr[i] = std::conj(gap.weight[i] * u.coefficients()[i] * std::conj(v.coefficients()[i]));
  const auto c = SpectralField::fromCoefficients(g, std::move(corr));
  int best = 0;
  for (int j = 1; j < c.size(); ++j)
    if (c[j] > c[best]) best = j;
  double y0 = g.node(best);

  const double h = g.spacing();
  double lo = y0 - h, hi = y0 + h;
  const double invPhi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - invPhi * (hi - lo), b = lo + invPhi * (hi - lo);
  double fa = gap.value(a), fb = gap.value(b);
  for (int it = 0; it < 60 && hi - lo > 1e-10 * h; ++it) {
    if (fa < fb) {
      hi = b; b = a; fb = fa;
      a = hi - invPhi * (hi - lo);
      fa = gap.value(a);
    } else {
      lo = a; a = b; fa = fb;
      b = lo + invPhi * (hi - lo);
      fb = gap.value(b);
    }
  }
  double y = 0.5 * (lo + hi);
  double best2 = gap.value(y);
  for (int it = 0; it < 8; ++it) {
    const auto [d1, d2] = gap.correlationDerivatives(y);
    if (!(d2 < 0.0)) break;
    const double candidate = y - d1 / d2;
    if (std::abs(candidate - y) > h) break;
    const double value = gap.value(candidate);
    if (!(value <= best2)) break;
    y = candidate;
    best2 = value;
  }
  if (const double zero = gap.value(0.0); zero <= best2) {
    y = 0.0;
    best2 = zero;
  }
  return {std::sqrt(std::max(best2, 0.0)), detail::wrapShift(y, g.period())};
}

}  // namespace solwave
