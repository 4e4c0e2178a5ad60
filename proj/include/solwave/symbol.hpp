#pragma once

// Dispersion symbols m(k) of smoothing Fourier multipliers: even, with a
// strict positive global maximum at k = 0 and a non-degenerate even Taylor
// expansion there.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "solwave/error.hpp"

namespace solwave {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

class DispersionSymbol {
 public:
  using Function = std::function<double(double)>;

  /// kCut is located once here (infinite when m never settles below m(0)/2);
  /// the remaining Taylor data is trusted as given and checked separately by
  /// validateSymbol().
  DispersionSymbol(std::string name, Function eval, double mZero, double decayOrder,
                   int jStar, double d2jStar)
      : name_(std::move(name)),
        eval_(std::move(eval)),
        mZero_(mZero),
        decayOrder_(decayOrder),
        jStar_(jStar),
        d2jStar_(d2jStar) {
    if (!eval_) throw Error(ErrorCode::InvalidArgument, "symbol '" + name_ + "' has no evaluator");
    if (jStar_ < 1) throw Error(ErrorCode::InvalidArgument, "jStar must be a positive integer");
    kCut_ = locateCutoff();
  }

  const std::string& name() const { return name_; }
  double operator()(double k) const { return eval_(k); }
  double eval(double k) const { return eval_(k); }
  double mZero() const { return mZero_; }
  double decayOrder() const { return decayOrder_; }
  int jStar() const { return jStar_; }
  double d2jStar() const { return d2jStar_; }
  double kCut() const { return kCut_; }

  /// Leading Taylor coefficient m^(2j*)(0)/(2j*)!.
  double taylorCoefficient() const { return d2jStar_ / factorial(2 * jStar_); }

 private:
  // Smallest k with m(k') <= m(0)/2 for all k' >= k: bisection inside the
  // first sample interval where the running-from-the-right maximum of 10^4
  // samples drops below the half level.
  double locateCutoff() const {
    const double half = 0.5 * mZero_;
    constexpr int kSamples = 10000;
    for (double kMax = 100.0; kMax <= 1.0e6; kMax *= 10.0) {
      std::vector<double> k(kSamples + 1), envelope(kSamples + 1);
      for (int i = 0; i <= kSamples; ++i) k[i] = kMax * i / kSamples;
      double running = -std::numeric_limits<double>::infinity();
      for (int i = kSamples; i >= 0; --i) {
        running = std::max(running, eval_(k[i]));
        envelope[i] = running;
      }
      if (envelope[kSamples] > half) continue;
      int first = 0;
      while (envelope[first] > half) ++first;
      if (first == 0) return 0.0;
      double lo = k[first - 1], hi = k[first];
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval_(mid) > half) lo = mid; else hi = mid;
      }
      return hi;
    }
    // no cutoff on [0, 1e6]; validateSymbol reports it
    return std::numeric_limits<double>::infinity();
  }

  std::string name_;
  Function eval_;
  double mZero_;
  double decayOrder_;
  int jStar_;
  double d2jStar_;
  double kCut_ = 0.0;
};

/// m(k) = sqrt(tanh(k)/k), the linear phase speed of gravity water waves.
inline DispersionSymbol whitham() {
  auto eval = [](double k) {
    const double a = std::abs(k);
    if (a < 1e-2) {
      const double k2 = a * a;
      const double ratio = 1.0 + k2 * (-1.0 / 3.0 + k2 * (2.0 / 15.0 + k2 * (-17.0 / 315.0)));
      return std::sqrt(ratio);
    }
    return std::sqrt(std::tanh(a) / a);
  };
  return DispersionSymbol("whitham", eval, 1.0, -0.5, 1, -1.0 / 3.0);
}

/// m(k) = exp(-k^2). Decays faster than any power; decayOrder is nominal.
inline DispersionSymbol gaussian() {
  return DispersionSymbol("gaussian", [](double k) { return std::exp(-k * k); }, 1.0, -1.0, 1,
                          -2.0);
}

/// m(k) = (1 + k^2)^(-s), s > 0.
inline DispersionSymbol rational(double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "rational symbol needs s > 0");
  std::ostringstream name;
  name.precision(17);
  name << "rational:" << s;
  return DispersionSymbol(
      name.str(), [s](double k) { return std::pow(1.0 + k * k, -s); }, 1.0, -2.0 * s, 1,
      -2.0 * s);
}

/// Resolves the CLI names "whitham", "gaussian" and "rational:s".
inline DispersionSymbol symbolByName(const std::string& name) {
  if (name == "whitham") return whitham();
  if (name == "gaussian") return gaussian();
  if (name.rfind("rational:", 0) == 0) {
    const std::string arg = name.substr(9);
    std::size_t pos = 0;
    double s = 0.0;
    try {
      s = std::stod(arg, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != arg.size())
      throw Error(ErrorCode::InvalidArgument, "cannot parse exponent in '" + name + "'");
    return rational(s);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown symbol '" + name + "'");
}

/// r(k) = m(k) - m(0) - m^(2j*)(0) k^(2j*) / (2j*)!.
inline double taylorRemainder(const DispersionSymbol& s, double k) {
  return s(k) - s.mZero() - s.taylorCoefficient() * std::pow(k, 2 * s.jStar());
}

struct SymbolCheck {
  std::string name;       // property checked
  std::string violation;  // e.g. NOT_EVEN; empty when passed
  bool passed = true;
  double worstK = 0.0;
  double worstValue = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::string symbol;
  std::vector<SymbolCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const SymbolCheck& c) { return c.passed; });
  }

  const SymbolCheck* firstViolation() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }

  const SymbolCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Samples [-kMax, kMax] uniformly and checks evenness, the strict maximum,
/// the sign conditions, Taylor consistency and the cutoff property.
inline ValidationReport validateSymbol(const DispersionSymbol& s, double kMax, int nSamples) {
  if (!(kMax > 0.0)) throw Error(ErrorCode::InvalidArgument, "kMax must be positive");
  if (nSamples < 16) throw Error(ErrorCode::InvalidArgument, "nSamples must be at least 16");

  ValidationReport report;
  report.symbol = s.name();
  const double m0 = s.mZero();
  const double scale = std::max(1.0, std::abs(m0));

  std::vector<double> ks(nSamples);
  for (int i = 0; i < nSamples; ++i) ks[i] = -kMax + 2.0 * kMax * i / (nSamples - 1);

  {
    SymbolCheck c{"even", "", true, 0.0, 0.0, ""};
    for (double k : ks) {
      const double gap = std::abs(s(k) - s(-k));
      if (gap > c.worstValue) { c.worstValue = gap; c.worstK = k; }
    }
    if (!(c.worstValue <= 1e-12 * scale)) { c.passed = false; c.violation = "NOT_EVEN"; }
    report.checks.push_back(c);
  }
  {
    SymbolCheck c{"positive_max", "", m0 > 0.0, 0.0, m0, ""};
    if (!c.passed) c.violation = "NONPOSITIVE_MAX";
    report.checks.push_back(c);
  }
  {
    SymbolCheck c{"negative_curvature", "", s.d2jStar() < 0.0, 0.0, s.d2jStar(), ""};
    if (!c.passed) c.violation = "NONNEGATIVE_CURVATURE";
    report.checks.push_back(c);
  }
  {
    // Worst value is max over k != 0 of m(k) - m(0); must stay negative.
    SymbolCheck c{"strict_max", "", true, 0.0, -std::numeric_limits<double>::infinity(), ""};
    for (double k : ks) {
      if (k == 0.0) continue;
      const double excess = s(k) - m0;
      if (excess > c.worstValue) { c.worstValue = excess; c.worstK = k; }
    }
    if (!(c.worstValue < 0.0)) { c.passed = false; c.violation = "NO_STRICT_MAX"; }
    report.checks.push_back(c);
  }
  {
    // r(k)/k^(2j*+2) must stay bounded as k -> 0: compare the sup over
    // (0.01, 0.1] with the sup over [0.1, 1].
    const int power = 2 * s.jStar() + 2;
    double supNear = 0.0, supFar = 0.0, worstK = 0.0;
    constexpr int kTaylorSamples = 200;
    for (int i = 0; i <= kTaylorSamples; ++i) {
      const double k = std::pow(10.0, -2.0 + 2.0 * i / kTaylorSamples);
      const double ratio = std::abs(taylorRemainder(s, k)) / std::pow(k, power);
      if (k <= 0.1) {
        if (ratio > supNear) { supNear = ratio; worstK = k; }
      } else {
        supFar = std::max(supFar, ratio);
      }
    }
    SymbolCheck c{"taylor", "", true, worstK, std::max(supNear, supFar), ""};
    std::ostringstream d;
    d << "C_near=" << supNear << " C_far=" << supFar;
    c.detail = d.str();
    if (!std::isfinite(supNear) || supNear > 10.0 * supFar + 1e-6) {
      c.passed = false;
      c.violation = "TAYLOR_MISMATCH";
    }
    report.checks.push_back(c);
  }
  {
    // Central difference of order 2j* at the origin.
    const int order = 2 * s.jStar();
    const double h = s.jStar() == 1 ? 1e-3 : std::pow(std::numeric_limits<double>::epsilon(),
                                                      1.0 / (order + 2));
    double acc = 0.0, binom = 1.0;
    for (int i = 0; i <= order; ++i) {
      acc += ((i % 2) ? -binom : binom) * s((s.jStar() - i) * h);
      binom = binom * (order - i) / (i + 1);
    }
    const double fd = acc / std::pow(h, order);
    const double rel = std::abs(fd - s.d2jStar()) / std::abs(s.d2jStar());
    SymbolCheck c{"curvature_fd", "", rel <= 1e-4, h, fd, ""};
    std::ostringstream d;
    d << "fd=" << fd << " declared=" << s.d2jStar() << " rel=" << rel;
    c.detail = d.str();
    if (!c.passed) c.violation = "CURVATURE_MISMATCH";
    report.checks.push_back(c);
  }
  {
    SymbolCheck c{"cutoff", "", true, s.kCut(), -std::numeric_limits<double>::infinity(), ""};
    for (double k : ks) {
      if (std::abs(k) < s.kCut()) continue;
      const double excess = s(k) - 0.5 * m0;
      if (excess > c.worstValue) { c.worstValue = excess; c.worstK = k; }
    }
    if (!std::isfinite(s.kCut())) {
      c.passed = false;
      c.violation = "CUTOFF_VIOLATION";
      c.detail = "m(k) does not stay below m(0)/2 on any [k0, 1e6]";
    } else if (c.worstValue > 0.0) {
      c.passed = false;
      c.violation = "CUTOFF_VIOLATION";
    }
    report.checks.push_back(c);
  }
  return report;
}

/// Throws InvalidSymbol naming the first violation and its sample point.
inline void requireValid(const ValidationReport& report) {
  if (const auto* c = report.firstViolation()) {
    std::ostringstream msg;
    msg.precision(10);
    msg << c->violation << " for symbol '" << report.symbol << "' at k=" << c->worstK
        << " (value " << c->worstValue << ")";
    throw Error(ErrorCode::InvalidSymbol, msg.str());
  }
}

}  // namespace solwave
