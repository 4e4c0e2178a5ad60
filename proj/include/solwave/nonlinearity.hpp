#pragma once

// Nonlinearities n = n_p + n_r with a homogeneous leading part n_p and a
// higher-order remainder, together with their primitives.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "solwave/error.hpp"

namespace solwave {

enum class NonlinearityKind {
  SignedModulus,  // n_p(x) = c_p |x|^p
  OddPower,       // n_p(x) = c_p x^p, p odd, c_p > 0
  PurePower,      // n_p(x) = c_p x^p, p even
};

inline std::string_view toString(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::SignedModulus: return "SIGNED_MODULUS";
    case NonlinearityKind::OddPower: return "ODD_POWER";
    case NonlinearityKind::PurePower: return "PURE_POWER";
  }
  return "UNKNOWN";
}

/// Higher-order part n_r with |n_r(x)| = O(|x|^(p+delta)).
struct Remainder {
  using Function = std::function<double(double)>;
  Function value;
  Function derivative;
  /// Optional exact primitive vanishing at 0; quadrature is used otherwise.
  Function primitive;
  /// n_r'', n_r''', ... when available.
  std::vector<Function> higherDerivatives;
  double delta = 1.0;

  /// Highest derivative order available (1 = only n_r').
  int derivativeOrder() const { return 1 + static_cast<int>(higherDerivatives.size()); }
};

namespace detail {

inline bool isInteger(double x) { return std::abs(x - std::round(x)) < 1e-12; }

// Composite 5-point Gauss-Legendre on [0, x].
inline double integrateFromZero(const std::function<double(double)>& f, double x) {
  static constexpr std::array<double, 5> nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                  0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.2369268850561891, 0.4786286704993665,
                                                    0.5688888888888889, 0.4786286704993665,
                                                    0.2369268850561891};
  constexpr int panels = 16;
  const double h = x / panels;
  double sum = 0.0;
  for (int j = 0; j < panels; ++j) {
    const double mid = (j + 0.5) * h;
    for (int i = 0; i < 5; ++i) sum += weights[i] * f(mid + 0.5 * h * nodes[i]);
  }
  return 0.5 * h * sum;
}

}  // namespace detail

class Nonlinearity {
 public:
  Nonlinearity(NonlinearityKind kind, double p, double cp, std::optional<Remainder> remainder = {},
               std::string name = {})
      : kind_(kind), p_(p), cp_(cp), remainder_(std::move(remainder)), name_(std::move(name)) {
    if (!(p_ >= 2.0)) throw Error(ErrorCode::InvalidArgument, "nonlinearity exponent must be >= 2");
    if (cp_ == 0.0 || !std::isfinite(cp_))
      throw Error(ErrorCode::InvalidArgument, "leading coefficient c_p must be finite and nonzero");
    if (kind_ == NonlinearityKind::OddPower) {
      if (!detail::isInteger(p_) || static_cast<long>(std::round(p_)) % 2 == 0)
        throw Error(ErrorCode::InvalidArgument, "ODD_POWER needs an odd integer exponent");
      if (cp_ <= 0.0) throw Error(ErrorCode::InvalidArgument, "ODD_POWER needs c_p > 0");
    }
    if (kind_ == NonlinearityKind::PurePower &&
        (!detail::isInteger(p_) || static_cast<long>(std::round(p_)) % 2 != 0))
      throw Error(ErrorCode::InvalidArgument, "PURE_POWER needs an even integer exponent");
    if (remainder_) {
      if (!remainder_->value || !remainder_->derivative)
        throw Error(ErrorCode::InvalidArgument, "remainder needs n_r and n_r'");
      if (!(remainder_->delta > 0.0))
        throw Error(ErrorCode::InvalidArgument, "remainder needs delta > 0");
    }
    if (name_.empty()) {
      std::ostringstream s;
      s.precision(17);
      s << toString(kind_) << "(p=" << p_ << ",cp=" << cp_ << ")";
      name_ = s.str();
    }
    if (kind_ != NonlinearityKind::SignedModulus) intPower_ = static_cast<int>(std::round(p_));
  }

  NonlinearityKind kind() const { return kind_; }
  double p() const { return p_; }
  double cp() const { return cp_; }
  const std::optional<Remainder>& remainder() const { return remainder_; }
  const std::string& name() const { return name_; }
  bool homogeneous() const { return !remainder_.has_value(); }

  /// n_p(x).
  double leading(double x) const {
    if (kind_ == NonlinearityKind::SignedModulus) return cp_ * std::pow(std::abs(x), p_);
    return cp_ * ipow(x, intPower_);
  }

  double leadingPrime(double x) const {
    if (kind_ == NonlinearityKind::SignedModulus) {
      const double a = std::abs(x);
      return cp_ * p_ * std::pow(a, p_ - 1.0) * (x < 0.0 ? -1.0 : 1.0);
    }
    return cp_ * intPower_ * ipow(x, intPower_ - 1);
  }

  double operator()(double x) const { return evalN(x); }

  double evalN(double x) const {
    return remainder_ ? leading(x) + remainder_->value(x) : leading(x);
  }

  double evalNPrime(double x) const {
    return remainder_ ? leadingPrime(x) + remainder_->derivative(x) : leadingPrime(x);
  }

  /// N_{p+1}, the primitive of n_p vanishing at 0.
  double evalNp1(double x) const {
    if (kind_ == NonlinearityKind::SignedModulus)
      return cp_ * x * std::pow(std::abs(x), p_) / (p_ + 1.0);
    return cp_ * ipow(x, intPower_ + 1) / (p_ + 1.0);
  }

  /// N, the primitive of n vanishing at 0.
  double evalPrimitive(double x) const { return evalNp1(x) + remainderPrimitive(x); }

  double remainderPrimitive(double x) const {
    if (!remainder_ || x == 0.0) return 0.0;
    if (remainder_->primitive) return remainder_->primitive(x);
    return detail::integrateFromZero(remainder_->value, x);
  }

  /// Whether n is known to be C^order (needed by regularity diagnostics).
  bool supportsRegularity(int order) const {
    if (kind_ == NonlinearityKind::SignedModulus && !detail::isInteger(p_) &&
        order > static_cast<int>(std::ceil(p_)) - 1)
      return false;
    if (kind_ == NonlinearityKind::SignedModulus && detail::isInteger(p_) &&
        static_cast<long>(std::round(p_)) % 2 != 0 && order > static_cast<int>(std::round(p_)) - 1)
      return false;
    return !remainder_ || remainder_->derivativeOrder() >= order;
  }

 private:
  static double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }

  NonlinearityKind kind_;
  double p_;
  double cp_;
  std::optional<Remainder> remainder_;
  std::string name_;
  int intPower_ = 0;
};

/// n(u) = u^2, so that (n(u))_x = 2 u u_x.
inline Nonlinearity whithamNonlinearity() {
  return Nonlinearity(NonlinearityKind::PurePower, 2.0, 1.0, std::nullopt, "quadratic");
}

/// n(x) = sum_k c_k x^k for k = 2, 3, ...; the first nonzero term is n_p.
inline Nonlinearity polynomialNonlinearity(const std::vector<double>& coeffsFromSquare,
                                           std::string name = {}) {
  std::size_t lead = 0;
  while (lead < coeffsFromSquare.size() && coeffsFromSquare[lead] == 0.0) ++lead;
  if (lead == coeffsFromSquare.size())
    throw Error(ErrorCode::InvalidArgument, "polynomial nonlinearity has no nonzero coefficient");
  const int p = static_cast<int>(lead) + 2;
  const double cp = coeffsFromSquare[lead];

  // coefficient of x^(p+1+i) in the remainder
  std::vector<double> rest(coeffsFromSquare.begin() + lead + 1, coeffsFromSquare.end());
  while (!rest.empty() && rest.back() == 0.0) rest.pop_back();

  std::optional<Remainder> remainder;
  if (!rest.empty()) {
    std::size_t firstNonzero = 0;
    while (rest[firstNonzero] == 0.0) ++firstNonzero;
    const int base = p + 1;
    // d-th derivative of sum rest[i] x^(base+i)
    auto derivative = [rest, base](int d) {
      return [rest, base, d](double x) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          const int e = base + static_cast<int>(i);
          if (e < d || rest[i] == 0.0) continue;
          double c = rest[i];
          for (int j = 0; j < d; ++j) c *= (e - j);
          sum += c * std::pow(x, e - d);
        }
        return sum;
      };
    };
    Remainder r;
    r.value = derivative(0);
    r.derivative = derivative(1);
    r.primitive = [rest, base](double x) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        const int e = base + static_cast<int>(i) + 1;
        sum += rest[i] * std::pow(x, e) / e;
      }
      return sum;
    };
    const int maxExp = base + static_cast<int>(rest.size()) - 1;
    for (int d = 2; d <= maxExp + 1; ++d) r.higherDerivatives.push_back(derivative(d));
    r.delta = static_cast<double>(base + static_cast<int>(firstNonzero) - p);
    remainder = std::move(r);
  }

  const auto kind = (p % 2 == 0) ? NonlinearityKind::PurePower : NonlinearityKind::OddPower;
  return Nonlinearity(kind, p, cp, std::move(remainder), std::move(name));
}

namespace detail {

inline std::vector<double> parseNumberList(const std::string& text, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size())
      throw Error(ErrorCode::InvalidArgument, "cannot parse number '" + item + "' in '" + context + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Resolves "quadratic", "modulus:p,cp", "oddpower:p,cp" and "poly:c2,c3,...".
inline Nonlinearity nonlinearityByName(const std::string& name) {
  if (name == "quadratic") return whithamNonlinearity();
  auto args = [&](std::size_t prefix) { return detail::parseNumberList(name.substr(prefix), name); };
  if (name.rfind("modulus:", 0) == 0) {
    const auto a = args(8);
    if (a.size() != 2) throw Error(ErrorCode::InvalidArgument, "'" + name + "' needs p,cp");
    return Nonlinearity(NonlinearityKind::SignedModulus, a[0], a[1], std::nullopt, name);
  }
  if (name.rfind("oddpower:", 0) == 0) {
    const auto a = args(9);
    if (a.size() != 2) throw Error(ErrorCode::InvalidArgument, "'" + name + "' needs p,cp");
    return Nonlinearity(NonlinearityKind::OddPower, a[0], a[1], std::nullopt, name);
  }
  if (name.rfind("poly:", 0) == 0) return polynomialNonlinearity(args(5), name);
  throw Error(ErrorCode::InvalidArgument, "unknown nonlinearity '" + name + "'");
}

}  // namespace solwave
