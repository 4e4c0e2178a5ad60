#pragma once

// Time integration of u_t + (Lu + n(u))_x = 0 in Fourier space. The linear part
// is carried exactly by the factor exp(-i k m(k) t) (IFRK4) or integrated with
// the rest (RK4); the nonlinear flux is dealiased.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "solwave/error.hpp"
#include "solwave/functionals.hpp"
#include "solwave/grid.hpp"
#include "solwave/longwave.hpp"
#include "solwave/random.hpp"
#include "solwave/solver.hpp"

namespace solwave {

enum class Integrator { IFRK4, RK4 };

struct EvolutionConfig {
  double dt = 0.02;
  double T = 10.0;
  Integrator integrator = Integrator::IFRK4;
  bool dealias = true;
  /// Steps between recorded samples.
  int stride = 50;
  /// Drop n and integrate u_t + (Lu)_x = 0.
  bool linearOnly = false;
  double blowupFactor = 1e3;
  double tailLimit = 1e-6;
};

struct EvolutionTrace {
  std::vector<double> time;
  std::vector<double> energyDrift;    // |E(t) - E(0)| / |E(0)|
  std::vector<double> momentumDrift;  // |Q(t) - Q(0)| / Q(0)
  std::vector<double> orbitDist;      // empty without a reference
  std::vector<double> shift;
  std::optional<SpectralField> finalField;

  double maxEnergyDrift() const { return maxOf(energyDrift); }
  double maxMomentumDrift() const { return maxOf(momentumDrift); }
  double maxOrbitDistance() const { return maxOf(orbitDist); }
  double initialDistance() const { return orbitDist.empty() ? 0.0 : orbitDist.front(); }
  /// maxDist / initialDist (1 when both vanish).
  double distanceRatio() const {
    const double d0 = initialDistance(), dm = maxOrbitDistance();
    if (d0 == 0.0) return dm == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return dm / d0;
  }

 private:
  static double maxOf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
};

/// Evolution stopped by BLOWUP or RESOLUTION_LOSS; the trace up to the stop is kept.
class EvolutionError : public Error {
 public:
  EvolutionError(ErrorCode code, const std::string& what, EvolutionTrace trace)
      : Error(code, what), trace_(std::move(trace)) {}
  const EvolutionTrace& trace() const { return trace_; }

 private:
  EvolutionTrace trace_;
};

namespace detail {

class SpectralRhs {
 public:
  SpectralRhs(const Problem& prob, const PeriodicGrid& grid, const EvolutionConfig& cfg)
      : grid_(grid), nl_(prob.nonlinearity), dealias_(cfg.dealias), linearOnly_(cfg.linearOnly),
        ik_(grid.size()), linear_(grid.size()) {
    const int half = grid.size() / 2;
    const int cutoff = grid.size() / 3;
    for (int i = 0; i < grid.size(); ++i) {
      const double k = grid.wavenumber(i);
      const bool kept = i != half && (!dealias_ || std::abs(grid.mode(i)) <= cutoff);
      ik_[i] = kept ? Complex(0.0, k) : Complex(0.0, 0.0);
      linear_[i] = i == half ? Complex(0.0, 0.0) : Complex(0.0, -k * prob.symbol(k));
    }
  }

  const std::vector<Complex>& linear() const { return linear_; }

  // -ik F[n(u)], dealiased
  void nonlinear(const std::vector<Complex>& c, std::vector<Complex>& out) const {
    if (linearOnly_) {
      std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
      return;
    }
    const auto u = SpectralField::fromCoefficients(grid_, c);
    const auto f = u.mapSamples([this](double x) { return nl_.evalN(x); });
    const auto fc = f.coefficients();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -ik_[i] * fc[i];
  }

 private:
  PeriodicGrid grid_;
  Nonlinearity nl_;
  bool dealias_;
  bool linearOnly_;
  std::vector<Complex> ik_;
  std::vector<Complex> linear_;
};

inline void ifrk4Step(const SpectralRhs& rhs, std::vector<Complex>& c, double dt,
                      const std::vector<Complex>& half, const std::vector<Complex>& full,
                      std::vector<std::vector<Complex>>& w) {
  const std::size_t n = c.size();
  auto &a = w[0], &b = w[1], &cc = w[2], &d = w[3], &tmp = w[4];
  rhs.nonlinear(c, a);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = half[i] * (c[i] + 0.5 * dt * a[i]);
  rhs.nonlinear(tmp, b);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = half[i] * c[i] + 0.5 * dt * b[i];
  rhs.nonlinear(tmp, cc);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = full[i] * c[i] + dt * half[i] * cc[i];
  rhs.nonlinear(tmp, d);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = full[i] * c[i] + dt / 6.0 * (full[i] * a[i] + 2.0 * half[i] * (b[i] + cc[i]) + d[i]);
}

inline void rk4Step(const SpectralRhs& rhs, std::vector<Complex>& c, double dt,
                    std::vector<std::vector<Complex>>& w) {
  const std::size_t n = c.size();
  const auto& lin = rhs.linear();
  auto eval = [&](const std::vector<Complex>& x, std::vector<Complex>& out) {
    rhs.nonlinear(x, out);
    for (std::size_t i = 0; i < n; ++i) out[i] += lin[i] * x[i];
  };
  auto &k1 = w[0], &k2 = w[1], &k3 = w[2], &k4 = w[3], &tmp = w[4];
  eval(c, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * dt * k1[i];
  eval(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * dt * k2[i];
  eval(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + dt * k3[i];
  eval(tmp, k4);
  for (std::size_t i = 0; i < n; ++i) c[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace detail

/// Integrates to cfg.T and records drifts every cfg.stride steps (and at T).
/// With a reference, also records the orbit distance to it in H^s (s = sNorm).
inline EvolutionTrace evolve(const Problem& prob, const SpectralField& u0, const EvolutionConfig& cfg,
                             const SpectralField* reference = nullptr, double sNorm = 0.0) {
  if (!(cfg.dt > 0.0) || !(cfg.T > 0.0))
    throw Error(ErrorCode::InvalidArgument, "evolution needs dt > 0 and T > 0");
  if (cfg.stride < 1) throw Error(ErrorCode::InvalidArgument, "record stride must be >= 1");
  if (reference) u0.requireSameGrid(*reference);
  if (const double tail = spectralTail(u0); tail >= 1e-10) {
    std::ostringstream msg;
    msg << "initial spectral tail " << tail << " >= 1e-10";
    throw Error(ErrorCode::ResolutionLoss, msg.str());
  }
  const auto& grid = u0.grid();
  const auto f = fullFunctional(prob, grid);
  const detail::SpectralRhs rhs(prob, grid, cfg);

  const int steps = static_cast<int>(std::ceil(cfg.T / cfg.dt - 1e-9));
  const double dt = cfg.T / steps;
  std::vector<Complex> half(grid.size()), full(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    half[i] = std::exp(rhs.linear()[i] * (0.5 * dt));
    full[i] = half[i] * half[i];
  }
  std::vector<std::vector<Complex>> work(5, std::vector<Complex>(grid.size()));

  SpectralField start = cfg.dealias && !isDealiased(u0) ? dealias(u0) : u0;
  std::vector<Complex> c(start.coefficients().begin(), start.coefficients().end());
  const double e0 = cfg.linearOnly ? f.quadraticPart(start) : f.energy(start);
  const double q0 = momentum(start);
  const double scale0 = std::max(maxAbs(start), std::numeric_limits<double>::min());

  EvolutionTrace trace;
  auto record = [&](double t, const SpectralField& u) {
    const double e = cfg.linearOnly ? f.quadraticPart(u) : f.energy(u);
    trace.time.push_back(t);
    trace.energyDrift.push_back(e0 != 0.0 ? std::abs(e - e0) / std::abs(e0) : std::abs(e));
    trace.momentumDrift.push_back(q0 != 0.0 ? std::abs(momentum(u) - q0) / q0 : momentum(u));
    if (reference) {
      const auto od = orbitDistance(u, *reference, sNorm);
      trace.orbitDist.push_back(od.distance);
      trace.shift.push_back(od.shift);
    }
  };
  record(0.0, start);

  for (int step = 1; step <= steps; ++step) {
    if (cfg.integrator == Integrator::IFRK4)
      detail::ifrk4Step(rhs, c, dt, half, full, work);
    else
      detail::rk4Step(rhs, c, dt, work);
    if (step % cfg.stride != 0 && step != steps) continue;
    const auto u = SpectralField::fromCoefficients(grid, c);
    const double t = step * dt;
    const double size = maxAbs(u);
    if (!std::isfinite(size) || size > cfg.blowupFactor * scale0) {
      std::ostringstream msg;
      msg << "sup norm " << size << " exceeds " << cfg.blowupFactor << "x initial at t=" << t;
      trace.finalField = u;
      throw EvolutionError(ErrorCode::Blowup, msg.str(), std::move(trace));
    }
    record(t, u);
    if (const double tail = spectralTail(u); tail > cfg.tailLimit) {
      std::ostringstream msg;
      msg << "spectral tail " << tail << " exceeds " << cfg.tailLimit << " at t=" << t;
      trace.finalField = u;
      throw EvolutionError(ErrorCode::ResolutionLoss, msg.str(), std::move(trace));
    }
  }
  trace.finalField = SpectralField::fromCoefficients(grid, std::move(c));
  return trace;
}

struct TravelReport {
  double maxShapeError = 0.0;
  double measuredSpeed = 0.0;
  double speedError = 0.0;  // |measured - nu|
  EvolutionTrace trace;
};

/// Evolves a profile and compares it with translates of itself. The speed is
/// the least-squares slope of the (unwrapped) alignment shift.
inline TravelReport travelTest(const Problem& prob, const WaveProfile& profile, const EvolutionConfig& cfg) {
  TravelReport report;
  report.trace = evolve(prob, profile.field, cfg, &profile.field, 0.0);
  const auto& tr = report.trace;
  const double period = profile.field.grid().period();
  // u(t) = u0(x - nu t) aligns with shift y = -nu t
  std::vector<double> position(tr.shift.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < tr.shift.size(); ++i) {
    if (i > 0) {
      const double jump = tr.shift[i] + offset - position[i - 1];
      offset -= period * std::round(jump / period);
    }
    position[i] = tr.shift[i] + offset;
  }
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const double n = static_cast<double>(position.size());
  for (std::size_t i = 0; i < position.size(); ++i) {
    st += tr.time[i];
    sy += position[i];
    stt += tr.time[i] * tr.time[i];
    sty += tr.time[i] * position[i];
  }
  const double denom = n * stt - st * st;
  report.measuredSpeed = denom > 0.0 ? -(n * sty - st * sy) / denom : 0.0;
  report.speedError = std::abs(report.measuredSpeed - profile.nu);
  report.maxShapeError = tr.maxOrbitDistance();
  return report;
}

/// Evolves renormalize(profile + perturbation) (Q = mu) and records its L^2
/// orbit distance to the profile.
inline EvolutionTrace stabilityExperiment(const Problem& prob, const WaveProfile& profile,
                                          const SpectralField& perturbation, const EvolutionConfig& cfg) {
  if (!(normL2(perturbation) <= 0.1 * normL2(profile.field)))
    throw Error(ErrorCode::InvalidArgument, "perturbation exceeds 10% of the profile in L^2");
  SpectralField u0 = profile.field + perturbation;
  if (cfg.dealias) u0 = dealias(u0);
  u0 = renormalize(u0, momentum(profile.field));
  return evolve(prob, u0, cfg, &profile.field, 0.0);
}

/// Smooth random perturbation with ||v||_0 = relative * ||profile||_0: a
/// Gaussian envelope of three profile widths times a random combination of
/// cos(q x / sigma), sin(q x / sigma), q = 0..4, where sigma is the L^2 width of
/// the profile about its crest. Coefficients are standard normals drawn from
/// SplitMix64(seed).
inline SpectralField randomPerturbation(const SpectralField& profile, double relative,
                                        std::uint64_t seed) {
  const auto& g = profile.grid();
  double m0 = 0.0, m2 = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.node(j), w = profile[j] * profile[j];
    m0 += w;
    m2 += x * x * w;
  }
  const double sigma = m0 > 0.0 ? std::sqrt(m2 / m0) : 1.0;
  SplitMix64 rng(seed);
  double coef[10];
  for (double& a : coef) a = rng.normal();
  auto v = SpectralField::sample(g, [&](double x) {
    const double s = x / sigma;
    double sum = coef[0];
    for (int q = 1; q <= 4; ++q) sum += coef[2 * q - 1] * std::cos(q * s) + coef[2 * q] * std::sin(q * s);
    return sum * std::exp(-s * s / 18.0);
  });
  v = dealias(v);
  const double norm = normL2(v);
  if (!(norm > 0.0)) return v;
  return (relative * normL2(profile) / norm) * v;
}

}  // namespace solwave
