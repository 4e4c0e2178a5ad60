// Acceptance run: one PASS/FAIL line per criterion. With arguments, only the
// listed criterion numbers run. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "solwave/solwave.hpp"
#include "support.hpp"

using namespace solwave;

namespace {

// Independent closed forms for w = A sech^2(b x): int sech^4 = 4/3,
// int sech^6 = 16/15, int ((sech^2)')^2 = 16/15 (in units of b).
const double kA = std::pow(1.5, 2.0 / 3.0);
const double kB = std::pow(1.5, 1.0 / 3.0);
const double kNuLw = std::cbrt(2.0 / 3.0);
const double kIlw = kA * kA * kB * (16.0 / 15.0) / 12.0 - kA * kA * kA * (16.0 / 15.0) / kB / 3.0;
const std::vector<double> kSweep{1e-4, 3e-4, 1e-3, 3e-3, 1e-2};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

class Run {
 public:
  Problem prob = whithamProblem();

  SolveConfig configFor(double mu, double tol, std::optional<PeriodicGrid> grid = {}) {
    SolveConfig cfg;
    cfg.mu = mu;
    cfg.tolResidual = tol;
    const auto g = grid ? *grid : gridForMu(prob, mu, reference());
    cfg.period = g.period();
    cfg.points = g.size();
    return cfg;
  }

  WaveProfile solve(const SolveConfig& cfg) {
    const PeriodicGrid g(cfg.period, cfg.points);
    return minimizeConstrained(prob, cfg, longWaveSeed(prob, cfg.mu, g, reference()));
  }

  const SpectralField& reference() {
    if (!ref_) ref_ = longWaveReference(prob);
    return *ref_;
  }

  /// Whitham wave at mu = 1e-3 with a tight residual, shared by the dynamics checks.
  const WaveProfile& wave() {
    if (!wave_) wave_ = solve(configFor(1e-3, 1e-11));
    return *wave_;
  }

  const SweepResult& sweep() {
    if (!sweep_) {
      SolveConfig cfg;
      cfg.tolResidual = 1e-11;
      sweep_ = continuationSweep(prob, kSweep, cfg);
    }
    return *sweep_;
  }

  const std::vector<LongWaveComparison>& comparisons() {
    if (!cmp_) cmp_ = convergenceStudy(prob, sweep());
    return *cmp_;
  }

 private:
  std::optional<SpectralField> ref_;
  std::optional<WaveProfile> wave_;
  std::optional<SweepResult> sweep_;
  std::optional<std::vector<LongWaveComparison>> cmp_;
};

bool sweepComplete(const SweepResult& s, std::string& why) {
  for (const auto& e : s.entries)
    if (!e.profile) {
      why = "sweep entry mu=" + fmt("%g", e.mu) + " failed: " + e.error;
      return false;
    }
  return s.entries.size() == kSweep.size();
}

/// |values| strictly decreasing as mu decreases, i.e. increasing along the sweep.
bool shrinksWithMu(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(std::abs(values[i - 1]) < std::abs(values[i]))) return false;
  return true;
}

Outcome kdvOracle(Run&) {
  const PeriodicGrid g(80.0, 1024);
  const auto w = kdvSoliton(g);
  const auto nl = whithamNonlinearity();
  auto r = reducedEnergyGradient(1, -1.0 / 3.0, nl, w);
  r.axpy(kNuLw, w);
  const double q = momentum(w), res = normL2(r), e = reducedEnergy(1, -1.0 / 3.0, nl, w);
  std::ostringstream d;
  d << "|Q-1|=" << std::abs(q - 1) << " residual=" << res << " |E_lw-I_lw|=" << std::abs(e - kIlw);
  return {std::abs(q - 1) <= 1e-10 && res <= 1e-10 && std::abs(e - kIlw) <= 1e-8, d.str()};
}

Outcome reducedRecovery(Run&) {
  SolveConfig cfg;
  cfg.tolResidual = 1e-10;
  const auto w = minimizeReduced(1, -1.0 / 3.0, whithamNonlinearity(), cfg);
  const double dnu = std::abs(w.nu - kNuLw);
  const double dist = orbitDistance(w.field, kdvSoliton(w.field.grid()), 1.0).distance;
  std::ostringstream d;
  d << "|nu-nu_lw|=" << dnu << " H1 dist=" << dist << " iters=" << w.iterations;
  return {dnu <= 1e-6 && dist <= 1e-6, d.str()};
}

Outcome solitarySolve(Run& run) {
  const auto w = run.solve(run.configFor(1e-3, 1e-9));
  // residual recomputed from the returned field
  auto r = energyGradient(run.prob, w.field);
  r.axpy(w.nu, w.field);
  const double res = normL2(r), tail = tailCheck(w.field);
  std::ostringstream d;
  d << "residual=" << res << " nu=" << fmt("%.10f", w.nu) << " tail=" << tail << " iters=" << w.iterations;
  return {res <= 1e-9 && w.nu > 1.0 && tail < 1e-10, d.str()};
}

Outcome oracleEquivalence(Run& run) {
  std::ostringstream d;
  bool ok = true;
  for (double mu : {1e-4, 1e-3}) {
    const auto cfg = run.configFor(mu, 1e-11);
    const auto w = run.solve(cfg);
    PetviashviliConfig pc;
    pc.tolResidual = 1e-11;
    const auto p = petviashvili(run.prob, w.nu, pc, longWaveSeed(run.prob, mu, w.field.grid(), run.reference()));
    const double dist = orbitDistance(p.field, w.field).distance;
    d << "mu=" << mu << ": dist=" << dist << " ";
    ok = ok && dist <= 1e-7;
  }
  return {ok, d.str()};
}

Outcome speedLaw(Run& run) {
  std::string why;
  if (!sweepComplete(run.sweep(), why)) return {false, why};
  std::vector<double> dev;
  std::ostringstream d;
  for (const auto& e : run.sweep().entries) {
    const double v = std::abs((e.profile->nu - 1.0) / std::pow(e.mu, 2.0 / 3.0) - kNuLw);
    dev.push_back(v);
    d << fmt("%.2e", v) << " ";
  }
  const bool ok = shrinksWithMu(dev) && dev.front() <= 0.05 * kNuLw;
  return {ok, "|dev| by mu: " + d.str()};
}

Outcome energyLaw(Run& run) {
  std::string why;
  if (!sweepComplete(run.sweep(), why)) return {false, why};
  std::vector<double> dev;
  std::ostringstream d;
  for (const auto& e : run.sweep().entries) {
    const double v = std::abs((e.profile->energy + e.mu) / std::pow(e.mu, 5.0 / 3.0) - kIlw) / std::abs(kIlw);
    dev.push_back(v);
    d << fmt("%.2e", v) << " ";
  }
  return {shrinksWithMu(dev) && dev.front() <= 0.05, "relative dev by mu: " + d.str()};
}

Outcome profileConvergence(Run& run) {
  std::string why;
  if (!sweepComplete(run.sweep(), why)) return {false, why};
  std::vector<double> dist;
  std::ostringstream d;
  const auto& ref = run.reference();
  for (const auto& e : run.sweep().entries) {
    // independent of compareLongWave: scale down and align directly in H^1
    const auto down = scaleDown(e.mu, exponents(1, 2.0), e.profile->field, ref.grid());
    dist.push_back(orbitDistance(down, kdvSoliton(ref.grid()), 1.0).distance);
    d << fmt("%.3e", dist.back()) << " ";
  }
  const auto& cmp = run.comparisons();
  bool agree = cmp.size() == dist.size();
  for (std::size_t i = 0; agree && i < cmp.size(); ++i) agree = std::abs(cmp[i].alignedDistance - dist[i]) <= 1e-12;
  return {agree && shrinksWithMu(dist) && dist.front() <= 0.05, "H1 dist by mu: " + d.str()};
}

Outcome subadditivity(Run& run) {
  std::string why;
  if (!sweepComplete(run.sweep(), why)) return {false, why};
  const auto table = run.sweep().energyTable();
  int pairs = 0, violations = 0;
  // I_{mu_i + mu_j} from additional solves at each pairwise sum
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = i; j < table.size(); ++j) {
      const double mu = table[i].first + table[j].first;
      const auto w = run.solve(run.configFor(mu, 1e-11));
      ++pairs;
      if (!(w.energy < table[i].second + table[j].second)) ++violations;
    }
  // I_{a mu} < a I_mu for a > 1 within the table
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      const double a = table[j].first / table[i].first;
      ++pairs;
      if (!(table[j].second < a * table[i].second)) ++violations;
    }
  return {violations == 0, std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations"};
}

Outcome gradientCheck(Run& run) {
  std::mt19937_64 rng(2024);
  const PeriodicGrid g(40.0, 256);
  const auto full = fullFunctional(run.prob, g);
  const auto reduced = reducedFunctional(1, -1.0 / 3.0, whithamNonlinearity(), g);
  const double h = 1e-5;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto u = testing::randomField(g, rng, 10.0, 0.5), v = testing::randomField(g, rng, 10.0, 0.5);
    for (const DiscreteFunctional* f : {&full, &reduced}) {
      SpectralField up = u, um = u;
      up.axpy(h, v);
      um.axpy(-h, v);
      const double fd = (f->energy(up) - f->energy(um)) / (2 * h);
      const double an = innerL2(f->gradient(u), v);
      worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    }
  }
  return {worst <= 1e-6, "worst relative error " + fmt("%.2e", worst)};
}

Outcome conservation(Run& run) {
  // mu = 1e-3 on a half-length period with the same spacing as its sweep grid
  const auto w = run.solve(run.configFor(1e-3, 1e-11, PeriodicGrid(400.0, 1024)));
  EvolutionConfig cfg;
  cfg.T = 100.0;
  cfg.dt = 0.02;
  const auto tr = evolve(run.prob, w.field, cfg);

  const PeriodicGrid g(60.0, 1024);
  const auto u0 = dealias(SpectralField::sample(g, [](double x) { return std::exp(-x * x / 9.0); }));
  EvolutionConfig lin;
  lin.linearOnly = true;
  lin.T = 10.0;
  const auto lt = evolve(run.prob, u0, lin);
  std::vector<Complex> c(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double k = g.wavenumber(i);
    c[i] = u0.coefficients()[i] * std::polar(1.0, -k * run.prob.symbol(k) * lin.T);
  }
  const auto exact = SpectralField::fromCoefficients(g, std::move(c));
  double linErr = 0.0;
  for (int j = 0; j < g.size(); ++j) linErr = std::max(linErr, std::abs((*lt.finalField)[j] - exact[j]));

  std::ostringstream d;
  d << "Q drift=" << tr.maxMomentumDrift() << " E drift=" << tr.maxEnergyDrift() << " linear err=" << linErr;
  return {tr.maxMomentumDrift() <= 1e-10 && tr.maxEnergyDrift() <= 1e-8 && linErr <= 1e-12, d.str()};
}

Outcome travelling(Run& run) {
  EvolutionConfig cfg;
  cfg.T = 20.0;
  const auto r = travelTest(run.prob, run.wave(), cfg);
  std::ostringstream d;
  d << "shape err=" << r.maxShapeError << " speed err=" << r.speedError;
  return {r.maxShapeError <= 1e-6 && r.speedError <= 1e-6, d.str()};
}

Outcome stability(Run& run) {
  EvolutionConfig cfg;
  cfg.T = 100.0;
  const auto& w = run.wave();
  bool ok = true;
  double prev = 0.0;
  std::ostringstream d;
  for (double scale : {0.005, 0.01, 0.02}) {
    const auto tr = stabilityExperiment(run.prob, w, randomPerturbation(w.field, scale, 42), cfg);
    d << scale * 100 << "%: ratio " << fmt("%.3f", tr.distanceRatio()) << " ";
    ok = ok && tr.distanceRatio() <= 5.0 && tr.maxOrbitDistance() >= prev;
    prev = tr.maxOrbitDistance();
  }
  return {ok, d.str() + (ok ? "" : "(ratio or monotonicity violated)")};
}

Outcome penalization(Run& run) {
  auto cfg = run.configFor(1e-3, 1e-11);
  cfg.penalization = Penalization(run.prob.ballRadius);
  const auto p = run.solve(cfg);
  const double dist = orbitDistance(p.field, run.wave().field).distance;
  const double rho = (*cfg.penalization)(normH1Squared(p.field));
  std::ostringstream d;
  d << "orbit dist=" << dist << " rho=" << rho << " ||u||_1^2=" << normH1Squared(p.field);
  return {dist <= 1e-7 && rho == 0.0, d.str()};
}

Outcome scalingDiagnosticsCheck(Run& run) {
  std::string why;
  if (!sweepComplete(run.sweep(), why)) return {false, why};
  std::vector<ScalingDiagnostics> diag;
  for (const auto& e : run.sweep().entries) diag.push_back(scalingDiagnostics(run.prob, *e.profile, 0.9));
  const auto& base = diag[2];  // mu = 1e-3
  auto within = [](double v, double b) { return b > 0.0 && v <= 3.0 * b && v >= b / 3.0; };
  bool ok = true;
  std::ostringstream d;
  const char* names[] = {"ratio1", "ratio2", "supnorm"};
  for (int r = 0; r < 3; ++r) {
    d << names[r] << ":";
    for (const auto& s : diag) {
      const double v = r == 0 ? s.ratio1 : r == 1 ? s.ratio2 : s.supnormRatio;
      const double b = r == 0 ? base.ratio1 : r == 1 ? base.ratio2 : base.supnormRatio;
      d << " " << fmt("%.2e", v);
      ok = ok && within(v, b);
    }
    d << "; ";
  }
  return {ok, d.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budgetSeconds;
  std::function<Outcome(Run&)> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "KdV oracle exactness", 1.0, kdvOracle},
      {2, "reduced minimizer recovery", 30.0, reducedRecovery},
      {3, "solitary-wave solve", 60.0, solitarySolve},
      {4, "oracle equivalence", 60.0, oracleEquivalence},
      {5, "speed law", 300.0, speedLaw},
      {6, "energy law", 300.0, energyLaw},
      {7, "profile convergence", 300.0, profileConvergence},
      {8, "subadditivity and subhomogeneity", 300.0, subadditivity},
      {9, "gradient correctness", 60.0, gradientCheck},
      {10, "evolution conservation", 120.0, conservation},
      {11, "travelling verification", 60.0, travelling},
      {12, "conditional energetic stability", 300.0, stability},
      {13, "penalization fidelity", 60.0, penalization},
      {14, "scaling diagnostics", 300.0, scalingDiagnosticsCheck},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  Run run;
  int failures = 0;
  double total = 0.0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check(run);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += secs;
    if (secs > c.budgetSeconds) {
      o.pass = false;
      o.detail += " (over the " + fmt("%g", c.budgetSeconds) + " s budget)";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %-34s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d failed, total %.1f s\n", failures, total);
  return failures;
}
