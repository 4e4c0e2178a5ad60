#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "solwave/grid.hpp"
#include "support.hpp"

using namespace solwave;
using solwave::testing::randomField;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(PeriodicGrid, NodesAndWavenumbers) {
  const PeriodicGrid g(10.0, 16);
  EXPECT_DOUBLE_EQ(g.node(0), -5.0);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.625);
  EXPECT_EQ(g.mode(15), -1);
  EXPECT_EQ(g.mode(8), -8);
  EXPECT_DOUBLE_EQ(g.wavenumber(1), 2.0 * pi / 10.0);
  EXPECT_THROW(PeriodicGrid(10.0, 8), Error);
  EXPECT_THROW(PeriodicGrid(10.0, 48), Error);
  EXPECT_THROW(PeriodicGrid(0.0, 16), Error);
}

TEST(InnerL2, SingleModes) {
  const PeriodicGrid g(7.0, 64);
  const auto c = SpectralField::sample(g, [](double x) { return std::cos(2 * pi * x / 7.0); });
  const auto s = SpectralField::sample(g, [](double x) { return std::sin(2 * pi * x / 7.0); });
  const auto k = SpectralField::sample(g, [](double) { return 1.5; });
  EXPECT_NEAR(innerL2(c, c), 3.5, 1e-13);
  EXPECT_NEAR(innerL2(c, s), 0.0, 1e-13);
  EXPECT_NEAR(innerL2(k, k), 2.25 * 7.0, 1e-12);
}

TEST(InnerL2, GridMismatch) {
  const SpectralField a(PeriodicGrid(7.0, 64)), b(PeriodicGrid(7.0, 32));
  try {
    (void)innerL2(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(SpectralField, RoundTripAndParseval) {
  std::mt19937_64 rng(7);
  const PeriodicGrid g(13.0, 128);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s(g.size());
    for (auto& v : s) v = normal(rng);
    const auto u = SpectralField::fromSamples(g, s);
    const auto back = SpectralField::fromCoefficients(g, {u.coefficients().begin(), u.coefficients().end()});
    double worst = 0.0, scale = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      worst = std::max(worst, std::abs(back[j] - s[j]));
      scale = std::max(scale, std::abs(s[j]));
    }
    EXPECT_LT(worst, 1e-12 * scale);
    double phys = 0.0, spec = 0.0;
    for (int j = 0; j < g.size(); ++j) phys += s[j] * s[j];
    phys *= g.spacing();
    for (const auto& c : u.coefficients()) spec += std::norm(c);
    EXPECT_NEAR(phys, spec, 1e-10 * phys);
    // conjugate symmetry of a real field
    for (int m = 1; m < g.size() / 2; ++m)
      EXPECT_NEAR(std::abs(u.coefficient(m) - std::conj(u.coefficient(-m))), 0.0, 1e-12);
  }
}

TEST(SpectralField, UnitaryConvention) {
  // u = cos(2 pi x / P) has coefficients sqrt(P)/2 at m = +-1
  const PeriodicGrid g(9.0, 32);
  const auto u = SpectralField::sample(g, [](double x) { return std::cos(2 * pi * x / 9.0); });
  // x_0 = -P/2 contributes the phase e^{-i pi m}
  EXPECT_NEAR(std::abs(u.coefficient(1)), std::sqrt(9.0) / 2.0, 1e-13);
  EXPECT_NEAR(std::abs(u.coefficient(0)), 0.0, 1e-13);
}

TEST(InnerL2, AgreesWithSpectralSum) {
  std::mt19937_64 rng(3);
  const PeriodicGrid g(20.0, 256);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = randomField(g, rng, 20.0), v = randomField(g, rng, 20.0);
    EXPECT_NEAR(innerL2(u, v), spectralInner(u, v), 1e-10 * normL2(u) * normL2(v));
  }
}

TEST(NormHs, Basics) {
  const PeriodicGrid g(11.0, 64);
  const double k = 2 * pi / 11.0;
  const auto u = SpectralField::sample(g, [&](double x) { return std::cos(k * x) + 0.3 * std::sin(k * x); });
  EXPECT_NEAR(normHs(u, 0.0), normL2(u), 1e-13);
  EXPECT_NEAR(normHs(u, 1.0) * normHs(u, 1.0), (1 + k * k) * innerL2(u, u), 1e-12);
  std::mt19937_64 rng(5);
  const auto r = randomField(g, rng);
  double prev = 0.0;
  for (double s = 0.0; s <= 4.0; s += 0.5) {
    EXPECT_GE(normHs(r, s), prev);
    prev = normHs(r, s);
  }
}

TEST(Dealias, KeepsLowModesAndIsIdempotent) {
  const PeriodicGrid g(10.0, 64);
  std::mt19937_64 rng(11);
  const auto low = randomField(g, rng, 8.0);
  const auto d = dealias(low);
  for (int j = 0; j < g.size(); ++j) EXPECT_NEAR(d[j], low[j], 1e-14);
  EXPECT_TRUE(isDealiased(low));

  const int m = g.size() / 2 - 1;
  const auto high = SpectralField::sample(g, [&](double x) { return std::cos(2 * pi * m * x / 10.0); });
  EXPECT_FALSE(isDealiased(high));
  EXPECT_LT(maxAbs(dealias(high)), 1e-14);

  std::normal_distribution<double> normal;
  std::vector<double> s(g.size());
  for (auto& v : s) v = normal(rng);
  const auto once = dealias(SpectralField::fromSamples(g, s));
  const auto twice = dealias(once);
  for (int j = 0; j < g.size(); ++j) EXPECT_EQ(once[j], twice[j]);
}

TEST(Resample, RefinementIsExactAtOldNodes) {
  const PeriodicGrid g(12.0, 64), fine(12.0, 128);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  std::vector<double> s(g.size());
  for (auto& v : s) v = normal(rng);
  const auto u = SpectralField::fromSamples(g, s);  // includes a Nyquist component
  const auto r = resampleToGrid(u, fine);
  for (int j = 0; j < g.size(); ++j) EXPECT_NEAR(r[2 * j], u[j], 1e-12);
}

TEST(Resample, EnlargePreservesDecayingProfile) {
  const PeriodicGrid g(60.0, 512), big(120.0, 1024);
  const auto u = SpectralField::sample(g, [](double x) { return std::pow(1.0 / std::cosh(x), 2); });
  ASSERT_LT(maxAbsOutside(u, 0.45 * 60.0), 1e-10);
  const auto r = resampleToGrid(u, big);
  EXPECT_NEAR(normL2(r), normL2(u), 1e-10 * normL2(u));
  EXPECT_NEAR(evaluateAt(r, 0.3), std::pow(1.0 / std::cosh(0.3), 2), 1e-12);
}

TEST(Resample, EnlargeRejectsNondecayingField) {
  const PeriodicGrid g(10.0, 64), big(20.0, 128);
  const auto u = SpectralField::sample(g, [](double x) { return std::cos(2 * pi * x / 10.0); });
  try {
    (void)resampleToGrid(u, big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TailTooLarge);
  }
}

TEST(Shift, SpectralAndCyclicAgree) {
  const PeriodicGrid g(16.0, 128);
  std::mt19937_64 rng(17);
  const auto u = randomField(g, rng);
  const auto a = shifted(u, 3 * g.spacing());
  const auto b = cyclicShift(u, 3);
  for (int j = 0; j < g.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-12);
  EXPECT_NEAR(evaluateAt(u, g.node(5) + 0.0), u[5], 1e-12);
  const auto c = shifted(u, 0.37);
  EXPECT_NEAR(c[10], evaluateAt(u, g.node(10) + 0.37), 1e-12);
}

TEST(SpectralTail, MeasuresHighBand) {
  const PeriodicGrid g(10.0, 64);
  const auto low = SpectralField::sample(g, [](double x) { return std::cos(2 * pi * x / 10.0); });
  EXPECT_LT(spectralTail(low), 1e-15);
  const auto mixed = SpectralField::sample(g, [](double x) {
    return std::cos(2 * pi * x / 10.0) + std::cos(2 * pi * 20 * x / 10.0);
  });
  EXPECT_NEAR(spectralTail(mixed), std::sqrt(0.5), 1e-12);
}
