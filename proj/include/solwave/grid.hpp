#pragma once

// Uniform periodic grids and real fields held simultaneously as node samples
// and Fourier coefficients under the unitary convention
//
//   u(x) = P^{-1/2} sum_m uhat_m exp(2 pi i m x / P),   x_j = -P/2 + j P / N,
//
// so that (P/N) sum_j u_j^2 = sum_m |uhat_m|^2 exactly.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "solwave/error.hpp"

namespace solwave {

using Complex = std::complex<double>;

class PeriodicGrid {
 public:
  PeriodicGrid(double period, int points) : period_(period), points_(points) {
    if (!(period > 0.0) || !std::isfinite(period))
      throw Error(ErrorCode::InvalidArgument, "grid period must be positive");
    if (!validSize(points))
      throw Error(ErrorCode::InvalidArgument, "grid size must be a power of two >= 16");
  }

  static bool validSize(int points) { return points >= 16 && (points & (points - 1)) == 0; }

  double period() const { return period_; }
  int size() const { return points_; }
  double spacing() const { return period_ / points_; }
  double node(int j) const { return -0.5 * period_ + j * spacing(); }

  /// Signed mode number of storage index i (FFT order; index N/2 is m = -N/2).
  int mode(int i) const { return i < points_ / 2 ? i : i - points_; }
  int index(int m) const { return m >= 0 ? m : m + points_; }
  double wavenumber(int i) const { return 2.0 * std::numbers::pi * mode(i) / period_; }
  /// Largest |k| kept by the 2/3 rule.
  double dealiasedMaxWavenumber() const {
    return 2.0 * std::numbers::pi * (points_ / 3) / period_;
  }

  bool sameAs(const PeriodicGrid& other) const {
    return points_ == other.points_ && std::abs(period_ - other.period_) <= 1e-12 * period_;
  }

 private:
  double period_;
  int points_;
};

namespace detail {

// One r2c/c2r plan pair per size and thread; buffers are FFTW-aligned.
class FftPlan {
 public:
  explicit FftPlan(int n) : n_(n) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(plannerMutex());
    forward_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(plannerMutex());
    fftw_destroy_plan(backward_);
    fftw_destroy_plan(forward_);
    fftw_free(spec_);
    fftw_free(real_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  // samples -> full coefficient array in FFT order
  void forward(std::span<const double> in, std::span<Complex> out, double period) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(forward_);
    const double scale = std::sqrt(period) / n_;
    const int half = n_ / 2;
    for (int m = 0; m <= half; ++m) {
      const double sign = (m % 2) ? -scale : scale;
      const Complex c(spec_[m][0] * sign, spec_[m][1] * sign);
      if (m < half) {
        out[m] = c;
        if (m > 0) out[n_ - m] = std::conj(c);
      } else {
        out[half] = Complex(c.real(), 0.0);
      }
    }
  }

  // Coefficients (assumed Hermitian; only m >= 0 and the Nyquist entry are read) -> samples.
  void backward(std::span<const Complex> in, std::span<double> out, double period) {
    const double scale = 1.0 / std::sqrt(period);
    const int half = n_ / 2;
    for (int m = 0; m <= half; ++m) {
      const double sign = (m % 2) ? -scale : scale;
      const Complex c = in[m];
      spec_[m][0] = c.real() * sign;
      spec_[m][1] = (m == 0 || m == half) ? 0.0 : c.imag() * sign;
    }
    fftw_execute(backward_);
    std::copy(real_, real_ + n_, out.begin());
  }

  static FftPlan& get(int n) {
    thread_local std::map<int, std::unique_ptr<FftPlan>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlan>(n);
    return *slot;
  }

 private:
  static std::mutex& plannerMutex() {
    static std::mutex m;
    return m;
  }

  int n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace detail

/// Real periodic field with paired samples and coefficients. Value type.
class SpectralField {
 public:
  explicit SpectralField(const PeriodicGrid& grid)
      : grid_(grid), samples_(grid.size(), 0.0), coeffs_(grid.size(), Complex(0.0, 0.0)) {}

  static SpectralField fromSamples(const PeriodicGrid& grid, std::vector<double> samples) {
    if (static_cast<int>(samples.size()) != grid.size())
      throw Error(ErrorCode::GridMismatch, "sample count does not match grid size");
    SpectralField f(grid);
    f.samples_ = std::move(samples);
    f.syncCoefficients();
    return f;
  }

  /// Coefficients are made Hermitian from their m >= 0 half before use.
  static SpectralField fromCoefficients(const PeriodicGrid& grid, std::vector<Complex> coeffs) {
    if (static_cast<int>(coeffs.size()) != grid.size())
      throw Error(ErrorCode::GridMismatch, "coefficient count does not match grid size");
    SpectralField f(grid);
    f.coeffs_ = std::move(coeffs);
    f.symmetrize();
    f.syncSamples();
    return f;
  }

  template <class F>
  static SpectralField sample(const PeriodicGrid& grid, F&& fn) {
    std::vector<double> s(grid.size());
    for (int j = 0; j < grid.size(); ++j) s[j] = fn(grid.node(j));
    return fromSamples(grid, std::move(s));
  }

  const PeriodicGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  std::span<const double> samples() const { return samples_; }
  std::span<const Complex> coefficients() const { return coeffs_; }
  double operator[](int j) const { return samples_[j]; }
  /// Coefficient of signed mode m in [-N/2, N/2).
  Complex coefficient(int m) const { return coeffs_[grid_.index(m)]; }

  /// Applies fn(k, uhat) -> uhat' coefficient-wise and resynchronizes samples.
  template <class F>
  SpectralField mapCoefficients(F&& fn) const {
    std::vector<Complex> c(coeffs_.size());
    for (int i = 0; i < size(); ++i) c[i] = fn(grid_.wavenumber(i), coeffs_[i]);
    return fromCoefficients(grid_, std::move(c));
  }

  /// Applies fn(u_j) nodewise and resynchronizes coefficients.
  template <class F>
  SpectralField mapSamples(F&& fn) const {
    std::vector<double> s(samples_.size());
    for (int j = 0; j < size(); ++j) s[j] = fn(samples_[j]);
    return fromSamples(grid_, std::move(s));
  }

  SpectralField& operator+=(const SpectralField& o) { return axpy(1.0, o); }
  SpectralField& operator-=(const SpectralField& o) { return axpy(-1.0, o); }
  SpectralField& operator*=(double a) {
    for (auto& v : samples_) v *= a;
    for (auto& c : coeffs_) c *= a;
    return *this;
  }

  /// this += a * o. Samples are recomputed from the coefficients: updating both
  /// arrays independently lets their round-off difference grow under iteration.
  SpectralField& axpy(double a, const SpectralField& o) {
    requireSameGrid(o);
    for (int i = 0; i < size(); ++i) coeffs_[i] += a * o.coeffs_[i];
    syncSamples();
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

  void requireSameGrid(const SpectralField& o) const {
    if (!grid_.sameAs(o.grid_))
      throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  }

 private:
  void syncCoefficients() {
    detail::FftPlan::get(size()).forward(samples_, coeffs_, grid_.period());
  }
  void syncSamples() { detail::FftPlan::get(size()).backward(coeffs_, samples_, grid_.period()); }
  void symmetrize() {
    const int n = size(), half = n / 2;
    coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
    coeffs_[half] = Complex(coeffs_[half].real(), 0.0);
    for (int m = 1; m < half; ++m) coeffs_[n - m] = std::conj(coeffs_[m]);
  }

  PeriodicGrid grid_;
  std::vector<double> samples_;
  std::vector<Complex> coeffs_;
};

/// (P/N) sum_j u_j v_j.
inline double innerL2(const SpectralField& u, const SpectralField& v) {
  u.requireSameGrid(v);
  const auto a = u.samples();
  const auto b = v.samples();
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return u.grid().spacing() * sum;
}

/// Re sum_m uhat_m conj(vhat_m); equals innerL2 by Parseval.
inline double spectralInner(const SpectralField& u, const SpectralField& v) {
  u.requireSameGrid(v);
  const auto a = u.coefficients();
  const auto b = v.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] * std::conj(b[i])).real();
  return sum;
}

inline double normL2(const SpectralField& u) { return std::sqrt(innerL2(u, u)); }

/// sqrt( sum_m (1 + k_m^2)^s |uhat_m|^2 ).
inline double normHs(const SpectralField& u, double s) {
  if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "normHs needs s >= 0");
  const auto c = u.coefficients();
  double sum = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double k = u.grid().wavenumber(i);
    sum += std::pow(1.0 + k * k, s) * std::norm(c[i]);
  }
  return std::sqrt(sum);
}

inline double maxAbs(const SpectralField& u) {
  double m = 0.0;
  for (double v : u.samples()) m = std::max(m, std::abs(v));
  return m;
}

/// Zeroes every mode with |m| > N/3 (this includes the Nyquist mode).
inline SpectralField dealias(const SpectralField& u) {
  const int cutoff = u.size() / 3;
  std::vector<Complex> c(u.coefficients().begin(), u.coefficients().end());
  for (int i = 0; i < u.size(); ++i)
    if (std::abs(u.grid().mode(i)) > cutoff) c[i] = 0.0;
  return SpectralField::fromCoefficients(u.grid(), std::move(c));
}

inline bool isDealiased(const SpectralField& u) {
  const int cutoff = u.size() / 3;
  for (int i = 0; i < u.size(); ++i)
    if (std::abs(u.grid().mode(i)) > cutoff && u.coefficients()[i] != Complex(0.0, 0.0))
      return false;
  return true;
}

/// Relative amplitude sqrt(E_tail / E) carried by modes with |m| > 2N/9, the
/// top third of the band kept by dealiasing and everything above it.
inline double spectralTail(const SpectralField& u) {
  const double bound = 2.0 * u.size() / 9.0;
  double tail = 0.0, total = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double e = std::norm(u.coefficients()[i]);
    total += e;
    if (std::abs(u.grid().mode(i)) > bound) tail += e;
  }
  return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

/// Trigonometric interpolant evaluated at an arbitrary point.
inline double evaluateAt(const SpectralField& u, double x) {
  const auto& g = u.grid();
  double sum = u.coefficients()[0].real();
  const int half = u.size() / 2;
  for (int m = 1; m < half; ++m) {
    const double k = 2.0 * std::numbers::pi * m / g.period();
    sum += 2.0 * (u.coefficient(m) * std::polar(1.0, k * x)).real();
  }
  const double kn = std::numbers::pi * u.size() / g.period();
  sum += u.coefficient(-half).real() * std::cos(kn * x);
  return sum / std::sqrt(g.period());
}

/// u(. + y) computed spectrally; the Nyquist mode keeps only its real part.
inline SpectralField shifted(const SpectralField& u, double y) {
  const int half = u.size() / 2;
  std::vector<Complex> c(u.size());
  for (int i = 0; i < u.size(); ++i) {
    const double k = u.grid().wavenumber(i);
    c[i] = i == half ? Complex(u.coefficients()[i].real() * std::cos(k * y), 0.0)
                     : u.coefficients()[i] * std::polar(1.0, k * y);
  }
  return SpectralField::fromCoefficients(u.grid(), std::move(c));
}

/// Exact translation by a whole number of nodes: result_j = u_{j + nodes}.
inline SpectralField cyclicShift(const SpectralField& u, int nodes) {
  const int n = u.size();
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = u[((j + nodes) % n + n) % n];
  return SpectralField::fromSamples(u.grid(), std::move(s));
}

/// Largest |u(x_j)| outside the window [-halfWidth, halfWidth] (0 if none).
inline double maxAbsOutside(const SpectralField& u, double halfWidth) {
  double m = 0.0;
  for (int j = 0; j < u.size(); ++j)
    if (std::abs(u.grid().node(j)) > halfWidth) m = std::max(m, std::abs(u[j]));
  return m;
}

/// Transfers u to a grid of the same period (spectral zero padding or
/// truncation) or of a different period (interpolant evaluated on the new
/// nodes inside the old period, zero outside). Changing the period requires
/// u to be below tailTol near the edge of whichever window is cut.
inline SpectralField resampleToGrid(const SpectralField& u, const PeriodicGrid& target,
                                    double tailTol = 1e-10) {
  const auto& g = u.grid();
  if (std::abs(target.period() - g.period()) <= 1e-12 * g.period()) {
    const int n = u.size(), n2 = target.size();
    std::vector<Complex> c(n2, Complex(0.0, 0.0));
    const int keep = std::min(n, n2) / 2;
    for (int m = -keep + 1; m < keep; ++m) c[target.index(m)] = u.coefficient(m);
    if (n2 > n) {
      // split the old Nyquist mode evenly between +-N/2 to stay real and exact
      const Complex ny = u.coefficient(-n / 2);
      c[target.index(n / 2)] = 0.5 * ny;
      c[target.index(-n / 2)] = 0.5 * ny;
    } else if (n2 == n) {
      c[target.index(-n / 2)] = u.coefficient(-n / 2);
    }
    return SpectralField::fromCoefficients(target, std::move(c));
  }

  // Different period: the wave must have decayed at the edge of the smaller window.
  const double window = 0.5 * std::min(g.period(), target.period());
  const double edge = 0.45 * std::min(g.period(), target.period());
  if (maxAbsOutside(u, edge) > tailTol)
    throw Error(ErrorCode::TailTooLarge, "field does not decay near the period boundary");

  std::vector<double> s(target.size(), 0.0);
  const double ratio = target.spacing() / g.spacing();
  const double offset = (target.node(0) - g.node(0)) / g.spacing();
  const bool aligned = std::abs(ratio - std::round(ratio)) < 1e-12 &&
                       std::abs(offset - std::round(offset)) < 1e-9;
  for (int j = 0; j < target.size(); ++j) {
    const double x = target.node(j);
    if (std::abs(x) >= window) continue;
    if (aligned) {
      const long idx = std::lround(offset + j * std::round(ratio));
      if (idx >= 0 && idx < u.size()) s[j] = u[static_cast<int>(idx)];
    } else {
      s[j] = evaluateAt(u, x);
    }
  }
  return SpectralField::fromSamples(target, std::move(s));
}

}  // namespace solwave
