#pragma once

// Discrete energy E(u) = -1/2 <u, Lu> - int N(u), momentum Q(u) = 1/2 int u^2,
// their L^2 gradients, the H^1 penalisation and the reduced long-wave energy.

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "solwave/grid.hpp"
#include "solwave/nonlinearity.hpp"
#include "solwave/operators.hpp"
#include "solwave/symbol.hpp"

namespace solwave {

/// Symbol, nonlinearity and the radius R of the admissible H^1 ball.
struct Problem {
  DispersionSymbol symbol;
  Nonlinearity nonlinearity;
  double ballRadius = 1.0;
};

/// Checks the pairing p in [2, 4 j* + 1) and R > 0.
inline Problem makeProblem(DispersionSymbol symbol, Nonlinearity nonlinearity,
                           double ballRadius = 1.0) {
  const double p = nonlinearity.p();
  const int j = symbol.jStar();
  if (!(p >= 2.0 && p < 4.0 * j + 1.0)) {
    std::ostringstream msg;
    msg << "p=" << p << " outside [2, " << 4 * j + 1 << ") for jStar=" << j;
    throw Error(ErrorCode::ExponentWindow, msg.str());
  }
  if (!(ballRadius > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  return Problem{std::move(symbol), std::move(nonlinearity), ballRadius};
}

inline Problem whithamProblem(double ballRadius = 1.0) {
  return makeProblem(whitham(), whithamNonlinearity(), ballRadius);
}

inline double momentum(const SpectralField& u) { return 0.5 * innerL2(u, u); }

/// Rescales u so that Q(u) = mu exactly.
inline SpectralField renormalize(const SpectralField& u, double mu) {
  const double q = momentum(u);
  if (!(q > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot renormalize a zero field");
  return std::sqrt(mu / q) * u;
}

/// Energy of the form -1/2 sum_m s(k_m)|uhat_m|^2 - (P/N) sum_j V((Du)_j) on a
/// fixed grid, D the 2/3 dealiasing projector. The gradient is
/// -S u - D f(Du) with f = V'.
class DiscreteFunctional {
 public:
  using Function = std::function<double(double)>;

  DiscreteFunctional(PeriodicGrid grid, std::vector<double> table, Function force,
                     Function potential)
      : grid_(grid),
        table_(std::move(table)),
        force_(std::move(force)),
        potential_(std::move(potential)) {}

  const PeriodicGrid& grid() const { return grid_; }
  std::span<const double> table() const { return table_; }

  double quadraticPart(const SpectralField& u) const {
    check(u);
    double sum = 0.0;
    for (int i = 0; i < u.size(); ++i) sum += table_[i] * std::norm(u.coefficients()[i]);
    return -0.5 * sum;
  }

  double nonlinearPart(const SpectralField& u) const {
    check(u);
    const SpectralField v = isDealiased(u) ? u : dealias(u);
    double sum = 0.0;
    for (double x : v.samples()) sum += potential_(x);
    return -grid_.spacing() * sum;
  }

  double energy(const SpectralField& u) const { return quadraticPart(u) + nonlinearPart(u); }

  SpectralField applySymbol(const SpectralField& u) const {
    check(u);
    return applyMultiplier(table_, u);
  }

  /// D f(Du).
  SpectralField force(const SpectralField& u) const {
    check(u);
    const SpectralField v = isDealiased(u) ? u : dealias(u);
    return dealias(v.mapSamples(force_));
  }

  SpectralField gradient(const SpectralField& u) const {
    SpectralField g = applySymbol(u);
    g += force(u);
    return g *= -1.0;
  }

 private:
  void check(const SpectralField& u) const {
    if (!u.grid().sameAs(grid_)) throw Error(ErrorCode::GridMismatch, "functional built for another grid");
  }

  PeriodicGrid grid_;
  std::vector<double> table_;
  Function force_;
  Function potential_;
};

inline DiscreteFunctional fullFunctional(const Problem& prob, const PeriodicGrid& grid) {
  const Nonlinearity nl = prob.nonlinearity;
  return DiscreteFunctional(
      grid, symbolTable(prob.symbol, grid), [nl](double x) { return nl.evalN(x); },
      [nl](double x) { return nl.evalPrimitive(x); });
}

/// Polynomial symbol m_lw(k) = m^(2j*)(0) k^(2j*) / (2j*)! with nonlinearity n_p.
inline DiscreteFunctional reducedFunctional(int jStar, double d2jStar, const Nonlinearity& nl,
                                            const PeriodicGrid& grid) {
  std::vector<double> table(grid.size());
  const double coeff = d2jStar / factorial(2 * jStar);
  for (int i = 0; i < grid.size(); ++i) table[i] = coeff * std::pow(grid.wavenumber(i), 2 * jStar);
  return DiscreteFunctional(
      grid, std::move(table), [nl](double x) { return nl.leading(x); },
      [nl](double x) { return nl.evalNp1(x); });
}

inline double energy(const Problem& prob, const SpectralField& u) {
  return fullFunctional(prob, u.grid()).energy(u);
}

/// E'(u) = -Lu - D n(Du).
inline SpectralField energyGradient(const Problem& prob, const SpectralField& u) {
  return fullFunctional(prob, u.grid()).gradient(u);
}

inline double reducedEnergy(int jStar, double d2jStar, const Nonlinearity& nl,
                            const SpectralField& w) {
  return reducedFunctional(jStar, d2jStar, nl, w.grid()).energy(w);
}

inline SpectralField reducedEnergyGradient(int jStar, double d2jStar, const Nonlinearity& nl,
                                           const SpectralField& w) {
  return reducedFunctional(jStar, d2jStar, nl, w.grid()).gradient(w);
}

/// rho(t) = f((t - R^2) / (3 R^2)) with f(s) = exp(-1/s) / (1 - s) on (0, 1):
/// zero up to R^2, smooth and increasing, infinite at (2R)^2.
class Penalization {
 public:
  explicit Penalization(double radius) : radius_(radius) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "penalization radius must be positive");
  }

  double radius() const { return radius_; }
  double limit() const { return 4.0 * radius_ * radius_; }

  double operator()(double t) const {
    const double s = scaled(t);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return std::numeric_limits<double>::infinity();
    return std::exp(-1.0 / s) / (1.0 - s);
  }

  double derivative(double t) const {
    const double s = scaled(t);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return std::numeric_limits<double>::infinity();
    const double e = std::exp(-1.0 / s);
    const double fprime = e / ((1.0 - s) * (1.0 - s)) + e / ((1.0 - s) * s * s);
    return fprime / (3.0 * radius_ * radius_);
  }

 private:
  double scaled(double t) const { return (t - radius_ * radius_) / (3.0 * radius_ * radius_); }
  double radius_;
};

inline double normH1Squared(const SpectralField& u) {
  const double n = normHs(u, 1.0);
  return n * n;
}

inline double penalizedEnergy(const Problem& prob, const Penalization& pen, const SpectralField& u) {
  const double t = normH1Squared(u);
  if (!(t < pen.limit())) throw Error(ErrorCode::OutOfDomain, "||u||_1 >= 2R");
  return energy(prob, u) + pen(t);
}

/// L^2 gradient of rho(||u||_1^2): 2 rho'(||u||_1^2) (u - u'').
inline SpectralField penalizationGradient(const Penalization& pen, const SpectralField& u) {
  const double t = normH1Squared(u);
  if (!(t < pen.limit())) throw Error(ErrorCode::OutOfDomain, "||u||_1 >= 2R");
  const double scale = 2.0 * pen.derivative(t);
  return u.mapCoefficients([scale](double k, Complex c) { return scale * (1.0 + k * k) * c; });
}

inline SpectralField penalizedEnergyGradient(const Problem& prob, const Penalization& pen,
                                             const SpectralField& u) {
  SpectralField g = energyGradient(prob, u);
  g += penalizationGradient(pen, u);
  return g;
}

/// |||v|||_{tau,mu} = ( int v^2 + mu^{-4 j* tau beta} (v^(2 j*))^2 )^{1/2}.
inline double weightedNorm(const SpectralField& v, double tau, double mu, int jStar, double beta) {
  if (!(tau < 1.0)) throw Error(ErrorCode::InvalidArgument, "weighted norm needs tau < 1");
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "weighted norm needs mu > 0");
  const double weight = std::pow(mu, -4.0 * jStar * tau * beta);
  double sum = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double k = v.grid().wavenumber(i);
    sum += (1.0 + weight * std::pow(k, 4 * jStar)) * std::norm(v.coefficients()[i]);
  }
  return std::sqrt(sum);
}

}  // namespace solwave
