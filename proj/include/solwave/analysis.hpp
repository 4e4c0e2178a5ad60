#pragma once

// Comparisons of computed waves with their long-wave limit, and the scaling
// and regularity diagnostics recorded along a sweep.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "solwave/functionals.hpp"
#include "solwave/longwave.hpp"
#include "solwave/operators.hpp"
#include "solwave/solver.hpp"

namespace solwave {

/// Unit-momentum reduced ground state with its multiplier and reduced energy.
struct ReducedReference {
  SpectralField field;
  double nu = 0.0;
  double energy = 0.0;
};

/// Closed-form KdV data for Whitham, otherwise the reduced minimiser.
inline ReducedReference reducedReference(const Problem& prob, int polarity = 0) {
  if (isWhithamLongWaveData(prob) && polarity >= 0)
    return {kdvSoliton(PeriodicGrid(80.0, 1024)), kdv::speed(), kdv::energy()};
  SolveConfig cfg;
  cfg.period = 80.0;
  cfg.points = 1024;
  cfg.tolResidual = 1e-10;
  cfg.polarity = polarity;
  const auto& s = prob.symbol;
  const auto w = minimizeReduced(s.jStar(), s.d2jStar(), prob.nonlinearity, cfg);
  return {w.field, w.nu, reducedEnergy(s.jStar(), s.d2jStar(), prob.nonlinearity, w.field)};
}

struct LongWaveComparison {
  double mu = 0.0;
  /// Aligned H^{j*} distance of mu^{-alpha} u(mu^{-beta} .) to the reference.
  double alignedDistance = 0.0;
  double speedDeviation = 0.0;   // (nu - m(0)) / mu^{(p-1) alpha} - nu_lw
  double energyDeviation = 0.0;  // (I + m(0) mu) / mu^{1 + (p-1) alpha} - I_lw
  double shift = 0.0;
};

inline LongWaveComparison compareLongWave(const Problem& prob, const WaveProfile& w,
                                          const ReducedReference& ref) {
  const auto e = exponents(prob.symbol.jStar(), prob.nonlinearity.p());
  const double m0 = prob.symbol.mZero();
  const double q = (prob.nonlinearity.p() - 1.0) * e.alpha;
  const auto down = scaleDown(w.mu, e, w.field, ref.field.grid());
  const auto od = orbitDistance(down, ref.field, prob.symbol.jStar());
  LongWaveComparison c;
  c.mu = w.mu;
  c.alignedDistance = od.distance;
  c.shift = od.shift;
  c.speedDeviation = (w.nu - m0) / std::pow(w.mu, q) - ref.nu;
  c.energyDeviation = (w.energy + m0 * w.mu) / std::pow(w.mu, 1.0 + q) - ref.energy;
  return c;
}

/// One comparison per converged sweep entry, in sweep order.
inline std::vector<LongWaveComparison> convergenceStudy(const Problem& prob, const SweepResult& sweep,
                                                        const ReducedReference& ref) {
  std::vector<LongWaveComparison> out;
  for (const auto& entry : sweep.entries)
    if (entry.profile) out.push_back(compareLongWave(prob, *entry.profile, ref));
  return out;
}

inline std::vector<LongWaveComparison> convergenceStudy(const Problem& prob, const SweepResult& sweep) {
  return convergenceStudy(prob, sweep, reducedReference(prob));
}

struct ScalingDiagnostics {
  double mu = 0.0;
  double tau = 0.0;
  double ratio1 = 0.0;        // |||u_1|||^2_{tau,mu} / mu
  double ratio2 = 0.0;        // ||u_2||_1^2 / mu^{tau beta (p-1) + p}
  double supnormRatio = 0.0;  // ||u||_inf / mu^alpha
  double lowNormH1 = 0.0;
  double highNormH1 = 0.0;
};

/// Band split at the symbol's cutoff wavenumber, weighted norm of the low part,
/// H^1 norm of the high part and the sup norm, each against its mu-scaling.
inline ScalingDiagnostics scalingDiagnostics(const Problem& prob, const WaveProfile& w, double tau) {
  const auto e = exponents(prob.symbol.jStar(), prob.nonlinearity.p());
  const double p = prob.nonlinearity.p();
  const auto [low, high] = bandSplit(prob.symbol, w.field);
  ScalingDiagnostics d;
  d.mu = w.mu;
  d.tau = tau;
  const double weighted = weightedNorm(low, tau, w.mu, prob.symbol.jStar(), e.beta);
  d.ratio1 = weighted * weighted / w.mu;
  d.lowNormH1 = normHs(low, 1.0);
  d.highNormH1 = normHs(high, 1.0);
  d.ratio2 = d.highNormH1 * d.highNormH1 / std::pow(w.mu, tau * e.beta * (p - 1.0) + p);
  d.supnormRatio = maxAbs(w.field) / std::pow(w.mu, e.alpha);
  return d;
}

struct RegularityReport {
  /// ||u||_{k+1} / ||u||_1 for k + 1 = 2, ..., 2 j*.
  std::vector<double> ratios;
};

/// Higher Sobolev norms of a solution against its H^1 norm. Needs n in
/// C^{2 j*} with the matching remainder derivatives.
inline RegularityReport regularityDiagnostic(const Problem& prob, const WaveProfile& w) {
  const int order = 2 * prob.symbol.jStar();
  if (!prob.nonlinearity.supportsRegularity(order))
    throw Error(ErrorCode::UnsupportedRegularity,
                "nonlinearity " + prob.nonlinearity.name() + " lacks derivatives up to order " +
                    std::to_string(order));
  RegularityReport r;
  const double h1 = normHs(w.field, 1.0);
  for (int s = 2; s <= order; ++s) r.ratios.push_back(h1 > 0.0 ? normHs(w.field, s) / h1 : 0.0);
  return r;
}

}  // namespace solwave
