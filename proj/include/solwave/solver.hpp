#pragma once

// Solitary waves as minimisers of E over {Q = mu}: projected gradient descent
// with exact renormalisation, a Petviashvili fixed-point oracle at fixed speed,
// the reduced long-wave minimiser, and continuation in mu.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "solwave/functionals.hpp"
#include "solwave/grid.hpp"
#include "solwave/longwave.hpp"
#include "solwave/operators.hpp"

namespace solwave {

struct StepPolicy {
  double initialStep = 1.0;
  double shrink = 0.5;
  double sufficientDecrease = 1e-4;
  double growth = 2.0;
  double maxStep = 1e3;
};

enum class SeedKind { KdvScaled, File, Previous };

struct SolveConfig {
  double mu = 1e-3;
  /// Grid; period <= 0 selects the long-wave adapted grid for mu.
  double period = 0.0;
  int points = 0;
  double tolResidual = 1e-9;
  int maxIter = 50000;
  StepPolicy step;
  std::optional<Penalization> penalization;
  SeedKind seed = SeedKind::KdvScaled;
  /// +1 or -1 forces the sign of the seed; 0 picks it from c_p.
  int polarity = 0;
  /// Precondition the full problem with (c - L)^{-1}.
  bool precondition = true;
};

struct WaveProfile {
  SpectralField field;
  double mu = 0.0;
  double nu = 0.0;
  double residual = 0.0;
  double energy = 0.0;
  std::string symbolId;
  std::string nonlinearityId;
  int iterations = 0;
  bool supercritical = false;
};

/// Solver failure with the residual history of the run.
class SolveError : public Error {
 public:
  SolveError(ErrorCode code, const std::string& what, std::vector<double> history = {})
      : Error(code, what), history_(std::move(history)) {}
  const std::vector<double>& residualHistory() const { return history_; }

 private:
  std::vector<double> history_;
};

struct DescentTrace {
  std::vector<double> energy;    // accepted iterates
  std::vector<double> residual;  // before each step
  std::vector<double> step;
};

struct DescentResult {
  SpectralField u;
  double nu = 0.0;
  double residual = 0.0;
  double energy = 0.0;
  int iterations = 0;
  DescentTrace trace;
};

namespace detail {

inline constexpr double collapseTail = 1e-3;

inline double energyOf(const DiscreteFunctional& f, const Penalization* pen, const SpectralField& u) {
  double e = f.energy(u);
  if (pen) {
    const double t = normH1Squared(u);
    e += t < pen->limit() ? (*pen)(t) : std::numeric_limits<double>::infinity();
  }
  return e;
}

inline double energyScale(const DiscreteFunctional& f, const SpectralField& u) {
  return std::abs(f.quadraticPart(u)) + std::abs(f.nonlinearPart(u));
}

inline SpectralField gradientOf(const DiscreteFunctional& f, const Penalization* pen,
                                const SpectralField& u) {
  SpectralField g = f.gradient(u);
  if (pen) g += penalizationGradient(*pen, u);
  return g;
}

}  // namespace detail

/// nu and ||E'(u) + nu u|| for a field on the constraint set.
inline std::pair<double, double> multiplierAndResidual(const DiscreteFunctional& f,
                                                       const Penalization* pen,
                                                       const SpectralField& u) {
  const SpectralField g = detail::gradientOf(f, pen, u);
  const double mu = momentum(u);
  const double nu = -innerL2(g, u) / (2.0 * mu);
  SpectralField r = g;
  r.axpy(nu, u);
  return {nu, normL2(r)};
}

/// Projected gradient descent on {Q = mu}. The search direction is the
/// (optionally preconditioned) gradient made tangent to the constraint, every
/// trial point is rescaled back onto it, and steps satisfy an Armijo test
/// relaxed only where the required decrease is below the round-off of E.
inline DescentResult projectedDescent(const DiscreteFunctional& f, const Penalization* pen,
                                      std::span<const double> preconditioner, SpectralField u,
                                      double mu, const SolveConfig& cfg) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (!(cfg.tolResidual > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolResidual must be positive");
  u = renormalize(isDealiased(u) ? u : dealias(u), mu);
  if (pen && !(normH1Squared(u) < pen->limit()))
    throw SolveError(ErrorCode::BallExit, "initial guess lies outside the ball of radius 2R");

  const bool preconditioned = !preconditioner.empty();
  DescentResult out{u, 0.0, 0.0, 0.0, 0, {}};
  double phi = detail::energyOf(f, pen, u);
  double t0 = cfg.step.initialStep;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int iter = 0;; ++iter) {
    const SpectralField g = detail::gradientOf(f, pen, u);
    const double nu = -innerL2(g, u) / (2.0 * mu);
    SpectralField r = g;
    r.axpy(nu, u);
    const double res = normL2(r);
    out.trace.residual.push_back(res);
    out.trace.energy.push_back(phi);
    if (!std::isfinite(res) || !std::isfinite(phi))
      throw SolveError(ErrorCode::MuTooLarge, "non-finite iterate", out.trace.residual);
    // A minimising sequence that concentrates on the grid scale has no
    // smooth limit: mu is beyond the solitary-wave regime.
    if (const double tail = spectralTail(u); tail > detail::collapseTail) {
      std::ostringstream msg;
      msg << "iterate collapses to the grid scale (spectral tail " << tail << ") after " << iter
          << " iterations";
      throw SolveError(ErrorCode::MuTooLarge, msg.str(), out.trace.residual);
    }
    if (res <= cfg.tolResidual) {
      out.u = u;
      out.nu = nu;
      out.residual = res;
      out.energy = phi;
      out.iterations = iter;
      return out;
    }
    if (iter >= cfg.maxIter) {
      std::ostringstream msg;
      msg << "residual " << res << " after " << iter << " iterations";
      throw SolveError(ErrorCode::MaxIter, msg.str(), out.trace.residual);
    }

    SpectralField d = r;
    if (preconditioned) {
      const SpectralField mg = applyMultiplier(preconditioner, g);
      const SpectralField mu_ = applyMultiplier(preconditioner, u);
      const double lambda = -innerL2(mg, u) / innerL2(mu_, u);
      d = mg;
      d.axpy(lambda, mu_);
    }
    d *= -1.0;
    const double slope = innerL2(g, d);  // < 0
    const double noise = 64.0 * eps * (detail::energyScale(f, u) + std::abs(phi));

    double t = t0;
    bool accepted = false, everInside = false;
    SpectralField candidate = u;
    double phiCandidate = phi;
    for (int k = 0; k < 80; ++k, t *= cfg.step.shrink) {
      candidate = u;
      candidate.axpy(t, d);
      candidate = renormalize(candidate, mu);
      phiCandidate = detail::energyOf(f, pen, candidate);
      if (!std::isfinite(phiCandidate)) continue;
      everInside = true;
      const double required = cfg.step.sufficientDecrease * t * slope;
      if (phiCandidate <= phi + required) {
        accepted = true;
        break;
      }
      // Below the resolution of E the residual decides.
      if (-required < noise && phiCandidate <= phi + noise &&
          multiplierAndResidual(f, pen, candidate).second < res) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (pen && !everInside)
        throw SolveError(ErrorCode::BallExit, "every trial step leaves the ball", out.trace.residual);
      std::ostringstream msg;
      msg << "line search failed at residual " << res;
      throw SolveError(ErrorCode::MuTooLarge, msg.str(), out.trace.residual);
    }
    out.trace.step.push_back(t);
    t0 = t == t0 ? std::min(cfg.step.maxStep, t * cfg.step.growth) : t;
    u = std::move(candidate);
    phi = phiCandidate;
  }
}

/// Derivative of order 1 or 2 of the trigonometric interpolant at x.
inline double derivativeAt(const SpectralField& u, double x, int order) {
  const int half = u.size() / 2;
  double sum = 0.0;
  for (int m = 1; m < half; ++m) {
    const double k = 2.0 * std::numbers::pi * m / u.grid().period();
    const Complex ik = Complex(0.0, k);
    const Complex factor = order == 1 ? ik : ik * ik;
    sum += 2.0 * (factor * u.coefficient(m) * std::polar(1.0, k * x)).real();
  }
  return sum / std::sqrt(u.grid().period());
}

/// Translates u so that the maximum of |u| sits at x = 0: whole-node cyclic
/// shift, then Newton on u' for the sub-node crest position.
inline SpectralField centerProfile(const SpectralField& u) {
  int best = 0;
  for (int j = 1; j < u.size(); ++j)
    if (std::abs(u[j]) > std::abs(u[best])) best = j;
  SpectralField c = cyclicShift(u, best - u.size() / 2);
  double x = 0.0;
  const double h = u.grid().spacing();
  for (int it = 0; it < 20; ++it) {
    const double d1 = derivativeAt(c, x, 1), d2 = derivativeAt(c, x, 2);
    if (d2 == 0.0) break;
    const double step = d1 / d2;
    if (!std::isfinite(step) || std::abs(x - step) > h) break;
    x -= step;
    if (std::abs(step) < 1e-15 * h) break;
  }
  return x == 0.0 ? c : shifted(c, x);
}

inline int defaultPolarity(const Nonlinearity& nl) {
  if (nl.kind() == NonlinearityKind::OddPower) return 1;
  return nl.cp() > 0.0 ? 1 : -1;
}

inline WaveProfile finishProfile(const DiscreteFunctional& f, const Penalization* pen,
                                 const SpectralField& raw, double mZero, std::string symbolId,
                                 std::string nonlinearityId, int iterations) {
  WaveProfile w{centerProfile(raw), 0.0, 0.0, 0.0, 0.0, std::move(symbolId),
                std::move(nonlinearityId), iterations, false};
  w.mu = momentum(w.field);
  std::tie(w.nu, w.residual) = multiplierAndResidual(f, pen, w.field);
  w.energy = detail::energyOf(f, pen, w.field);
  w.supercritical = w.nu > mZero;
  return w;
}

/// Minimises E over {Q = mu} starting from guess (which must live on the
/// configured grid, when one is configured).
inline WaveProfile minimizeConstrained(const Problem& prob, const SolveConfig& cfg,
                                       const SpectralField& guess) {
  if (cfg.period > 0.0 && !guess.grid().sameAs(PeriodicGrid(cfg.period, cfg.points)))
    throw Error(ErrorCode::GridMismatch, "guess is not on the configured grid");
  if (!(momentum(guess) > 0.0)) throw Error(ErrorCode::InvalidArgument, "guess has Q = 0");
  const auto f = fullFunctional(prob, guess.grid());
  const Penalization* pen = cfg.penalization ? &*cfg.penalization : nullptr;
  // (c - L)^{-1}, c the unpenalized multiplier of the guess (kept supercritical)
  const double m0 = prob.symbol.mZero();
  std::vector<double> precond;
  if (cfg.precondition) {
    const double c = std::max(multiplierAndResidual(f, nullptr, renormalize(guess, cfg.mu)).first,
                              m0 + 1e-3 * std::abs(m0) + 1e-6);
    precond.resize(f.table().size());
    for (std::size_t i = 0; i < precond.size(); ++i) precond[i] = 1.0 / (c - f.table()[i]);
  }
  const auto run = projectedDescent(f, pen, precond, guess, cfg.mu, cfg);
  WaveProfile w = finishProfile(f, pen, run.u, prob.symbol.mZero(), prob.symbol.name(),
                                prob.nonlinearity.name(), run.iterations);
  // centring moves samples off the nodes; pin Q back to mu
  w.field = renormalize(w.field, cfg.mu);
  w.mu = momentum(w.field);
  if (!w.supercritical) {
    std::ostringstream msg;
    msg << "converged speed nu=" << w.nu << " does not exceed m(0)=" << prob.symbol.mZero();
    throw SolveError(ErrorCode::MuTooLarge, msg.str(), run.trace.residual);
  }
  return w;
}

struct PetviashviliConfig {
  double tolResidual = 1e-10;
  int maxIter = 5000;
};

/// Fixed point of u = S^gamma (nu - L)^{-1} D n(Du) with the stabilising factor
/// S = <u, (nu - L) u> / <u, D n(Du)> and gamma = p / (p - 1).
inline WaveProfile petviashvili(const Problem& prob, double nu, const PetviashviliConfig& cfg,
                                const SpectralField& guess) {
  const double m0 = prob.symbol.mZero();
  if (!(nu > m0)) throw Error(ErrorCode::SubcriticalSpeed, "Petviashvili iteration needs nu > m(0)");
  const auto f = fullFunctional(prob, guess.grid());
  std::vector<double> shiftedSymbol(guess.size());
  for (int i = 0; i < guess.size(); ++i) shiftedSymbol[i] = nu - f.table()[i];
  std::vector<double> inverse(shiftedSymbol.size());
  for (std::size_t i = 0; i < inverse.size(); ++i) inverse[i] = 1.0 / shiftedSymbol[i];
  const double gamma = prob.nonlinearity.p() / (prob.nonlinearity.p() - 1.0);

  SpectralField u = isDealiased(guess) ? guess : dealias(guess);
  std::vector<double> history;
  for (int iter = 0; iter <= cfg.maxIter; ++iter) {
    const SpectralField force = f.force(u);
    SpectralField lhs = applyMultiplier(shiftedSymbol, u);
    SpectralField r = lhs - force;
    const double res = normL2(r);
    history.push_back(res);
    if (!std::isfinite(res)) break;
    if (res <= cfg.tolResidual) {
      WaveProfile w{centerProfile(u), 0.0, nu, 0.0, 0.0, prob.symbol.name(), prob.nonlinearity.name(),
                    iter, true};
      w.mu = momentum(w.field);
      SpectralField rc = applyMultiplier(shiftedSymbol, w.field) - f.force(w.field);
      w.residual = normL2(rc);
      w.energy = f.energy(w.field);
      return w;
    }
    const double num = innerL2(u, lhs), den = innerL2(u, force);
    if (!(num > 0.0 && den > 0.0)) break;
    const double s = std::pow(num / den, gamma);
    u = s * applyMultiplier(inverse, force);
  }
  std::ostringstream msg;
  msg << "Petviashvili iteration did not reach " << cfg.tolResidual << " (last residual "
      << (history.empty() ? 0.0 : history.back()) << ")";
  throw SolveError(ErrorCode::NoConvergence, msg.str(), std::move(history));
}

/// Minimiser of the reduced functional over {Q = 1}, with multiplier nu_lw.
/// The gradient is preconditioned by (1 + k^{2j*})^{-1}.
inline WaveProfile minimizeReduced(int jStar, double d2jStar, const Nonlinearity& nl,
                                   const SolveConfig& cfg) {
  const PeriodicGrid grid(cfg.period > 0.0 ? cfg.period : 80.0, cfg.points > 0 ? cfg.points : 1024);
  const auto f = reducedFunctional(jStar, d2jStar, nl, grid);
  std::vector<double> precond(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    precond[i] = 1.0 / (1.0 + std::pow(grid.wavenumber(i), 2 * jStar));
  const int sign = cfg.polarity != 0 ? cfg.polarity : defaultPolarity(nl);
  const auto seed = SpectralField::sample(grid, [sign](double x) {
    const double s = 1.0 / std::cosh(x);
    return sign * s * s;
  });
  SolveConfig local = cfg;
  local.mu = 1.0;
  const auto run = projectedDescent(f, nullptr, precond, seed, 1.0, local);
  std::ostringstream id;
  id << "reduced(j=" << jStar << ",d2=" << d2jStar << ")";
  WaveProfile w = finishProfile(f, nullptr, run.u, 0.0, id.str(), nl.name(), run.iterations);
  w.field = renormalize(w.field, 1.0);
  w.mu = momentum(w.field);
  if (!w.supercritical)
    throw SolveError(ErrorCode::MuTooLarge, "reduced multiplier is not positive", run.trace.residual);
  return w;
}

inline bool isWhithamLongWaveData(const Problem& prob) {
  const auto& nl = prob.nonlinearity;
  return prob.symbol.jStar() == 1 && std::abs(prob.symbol.d2jStar() + 1.0 / 3.0) < 1e-15 &&
         nl.p() == 2.0 && nl.cp() == 1.0 && nl.kind() != NonlinearityKind::OddPower;
}

/// Unit-momentum long-wave profile used to seed solves: the closed-form KdV
/// soliton for Whitham data, otherwise the reduced minimiser.
inline SpectralField longWaveReference(const Problem& prob, int polarity = 0) {
  const PeriodicGrid grid(80.0, 1024);
  if (isWhithamLongWaveData(prob) && polarity >= 0) return kdvSoliton(grid);
  SolveConfig cfg;
  cfg.period = grid.period();
  cfg.points = grid.size();
  cfg.tolResidual = 1e-10;
  cfg.polarity = polarity;
  return minimizeReduced(prob.symbol.jStar(), prob.symbol.d2jStar(), prob.nonlinearity, cfg).field;
}

/// Period max(64, 80 mu^{-beta}); the smallest power-of-two N (>= 64) on which
/// the scaled reference has spectralTail < 1e-12.
inline PeriodicGrid gridForMu(const Problem& prob, double mu, const SpectralField& reference) {
  const auto e = exponents(prob.symbol.jStar(), prob.nonlinearity.p());
  const double period = std::max(64.0, 80.0 * std::pow(mu, -e.beta));
  for (int n = 64; n <= (1 << 20); n *= 2) {
    const PeriodicGrid grid(period, n);
    if (spectralTail(scaleUp(mu, e, reference, grid, 1e-8)) < 1e-12) return grid;
  }
  throw Error(ErrorCode::ResolutionLoss, "no grid resolves the long-wave seed");
}

inline PeriodicGrid gridForMu(const Problem& prob, double mu) {
  return gridForMu(prob, mu, longWaveReference(prob));
}

/// mu^alpha w(mu^beta x) on the given grid, rescaled to Q = mu exactly.
inline SpectralField longWaveSeed(const Problem& prob, double mu, const PeriodicGrid& grid,
                                  const SpectralField& reference) {
  const auto e = exponents(prob.symbol.jStar(), prob.nonlinearity.p());
  return renormalize(dealias(scaleUp(mu, e, reference, grid, 1e-8)), mu);
}

struct SweepEntry {
  double mu = 0.0;
  PeriodicGrid grid{64.0, 64};
  std::optional<WaveProfile> profile;
  double tail = 0.0;
  std::string error;
  std::optional<ErrorCode> errorCode;
};

struct SweepResult {
  std::vector<SweepEntry> entries;

  std::vector<std::pair<double, double>> energyTable() const {
    std::vector<std::pair<double, double>> t;
    for (const auto& e : entries)
      if (e.profile) t.emplace_back(e.mu, e.profile->energy);
    return t;
  }
};

/// Solves each mu in ascending order: the first from the scaled long-wave
/// reference, every later one from the previous profile carried over by the
/// long-wave scaling. A failed entry keeps its error and the next one restarts
/// from the reference.
inline SweepResult continuationSweep(const Problem& prob, const std::vector<double>& muList,
                                     const SolveConfig& baseCfg) {
  if (muList.empty()) throw Error(ErrorCode::InvalidArgument, "empty mu list");
  for (std::size_t i = 0; i < muList.size(); ++i) {
    if (!(muList[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu values must be positive");
    if (i > 0 && !(muList[i] > muList[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "mu list must be strictly ascending");
  }
  const auto e = exponents(prob.symbol.jStar(), prob.nonlinearity.p());
  const auto reference = longWaveReference(prob, baseCfg.polarity);

  SweepResult result;
  std::optional<WaveProfile> previous;
  for (double mu : muList) {
    SweepEntry entry;
    entry.mu = mu;
    try {
      entry.grid = gridForMu(prob, mu, reference);
      SpectralField guess = previous
          ? renormalize(dealias(scaleUp(mu / previous->mu, e, previous->field, entry.grid, 1e-8)), mu)
          : longWaveSeed(prob, mu, entry.grid, reference);
      SolveConfig cfg = baseCfg;
      cfg.mu = mu;
      cfg.period = entry.grid.period();
      cfg.points = entry.grid.size();
      entry.profile = minimizeConstrained(prob, cfg, guess);
      entry.tail = tailCheck(entry.profile->field);
      previous = entry.profile;
    } catch (const Error& err) {
      entry.error = err.what();
      entry.errorCode = err.code();
      previous.reset();
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace solwave
