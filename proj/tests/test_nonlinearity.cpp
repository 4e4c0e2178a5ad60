#include <gtest/gtest.h>

#include <cmath>

#include "solwave/functionals.hpp"
#include "solwave/nonlinearity.hpp"

using namespace solwave;

TEST(Quadratic, ValuesAndPrimitives) {
  const auto n = whithamNonlinearity();
  EXPECT_EQ(n.name(), "quadratic");
  EXPECT_EQ(n.kind(), NonlinearityKind::PurePower);
  EXPECT_EQ(n.p(), 2.0);
  EXPECT_EQ(n.cp(), 1.0);
  EXPECT_TRUE(n.homogeneous());
  EXPECT_DOUBLE_EQ(n.evalN(0.5), 0.25);
  EXPECT_DOUBLE_EQ(n.evalPrimitive(0.5), 0.125 / 3.0);
  EXPECT_DOUBLE_EQ(n.evalNp1(0.5), 0.125 / 3.0);
  EXPECT_EQ(n.evalN(0.0), 0.0);
  EXPECT_EQ(n.evalNPrime(0.0), 0.0);
}

TEST(Quadratic, ChainRule) {
  // (n(u))_x = n'(u) u_x = 2 u u_x
  const auto n = whithamNonlinearity();
  for (double u : {-1.3, -0.2, 0.4, 2.0}) EXPECT_DOUBLE_EQ(n.evalNPrime(u), 2.0 * u);
}

TEST(SignedModulus, NegativeCoefficient) {
  const auto n = nonlinearityByName("modulus:2,-1");
  EXPECT_EQ(n.kind(), NonlinearityKind::SignedModulus);
  EXPECT_DOUBLE_EQ(n.evalN(-0.5), -0.25);
  EXPECT_DOUBLE_EQ(n.evalNp1(-0.5), 0.125 / 3.0);
  EXPECT_DOUBLE_EQ(n.evalN(0.5), -0.25);
}

TEST(SignedModulus, FractionalExponent) {
  const auto n = nonlinearityByName("modulus:2.5,1");
  EXPECT_NEAR(n.evalN(-0.49), std::pow(0.49, 2.5), 1e-15);
  EXPECT_NEAR(n.evalNp1(-0.49), -0.49 * std::pow(0.49, 2.5) / 3.5, 1e-15);
  // |x|^2.5 is C^2 but not C^3
  EXPECT_FALSE(n.supportsRegularity(3));
  EXPECT_TRUE(n.supportsRegularity(2));
}

TEST(Polynomial, RemainderPrimitive) {
  const auto n = nonlinearityByName("poly:1,0,1");  // x^2 + x^4
  EXPECT_FALSE(n.homogeneous());
  EXPECT_EQ(n.p(), 2.0);
  ASSERT_TRUE(n.remainder().has_value());
  EXPECT_DOUBLE_EQ(n.remainder()->delta, 2.0);
  EXPECT_NEAR(n.evalN(0.3), 0.09 + 0.0081, 1e-16);
  EXPECT_NEAR(n.evalPrimitive(0.3), std::pow(0.3, 3) / 3.0 + std::pow(0.3, 5) / 5.0, 1e-16);
  EXPECT_NEAR(n.evalNp1(0.3), std::pow(0.3, 3) / 3.0, 1e-16);
  EXPECT_TRUE(n.supportsRegularity(4));
}

TEST(Polynomial, LeadingTermSkipsZeros) {
  const auto n = nonlinearityByName("poly:0,2");
  EXPECT_EQ(n.p(), 3.0);
  EXPECT_EQ(n.cp(), 2.0);
  EXPECT_EQ(n.kind(), NonlinearityKind::OddPower);
  EXPECT_THROW(nonlinearityByName("poly:0,0"), Error);
}

TEST(Remainder, QuadratureFallback) {
  Remainder r;
  r.value = [](double x) { return std::sin(x) * x * x * x; };
  r.derivative = [](double x) { return std::cos(x) * x * x * x + 3.0 * std::sin(x) * x * x; };
  r.delta = 2.0;
  const Nonlinearity n(NonlinearityKind::PurePower, 2.0, 1.0, r, "custom");
  // int_0^x t^3 sin t dt = (3x^2 - 6) sin x - (x^3 - 6x) cos x
  const double x = 0.8;
  const double exact = (3 * x * x - 6) * std::sin(x) - (x * x * x - 6 * x) * std::cos(x);
  EXPECT_NEAR(n.remainderPrimitive(x), exact, 1e-13);
  EXPECT_FALSE(n.supportsRegularity(2));
}

TEST(Properties, PrimitiveConsistency) {
  const double h = 1e-5;
  for (const char* name : {"quadratic", "modulus:2,-1", "modulus:3.5,2", "oddpower:3,1", "poly:1,-0.5,0.25"}) {
    const auto n = nonlinearityByName(name);
    for (int i = -20; i <= 20; ++i) {
      const double x = i / 20.0;
      const double fd = (n.evalPrimitive(x + h) - n.evalPrimitive(x - h)) / (2 * h);
      EXPECT_NEAR(fd, n.evalN(x), 1e-8 * std::max(1.0, std::abs(n.evalN(x))) + 1e-10) << name << " x=" << x;
      const double fdPrime = (n.evalN(x + h) - n.evalN(x - h)) / (2 * h);
      EXPECT_NEAR(fdPrime, n.evalNPrime(x), 1e-7) << name << " x=" << x;
    }
  }
}

TEST(Properties, RemainderGrowth) {
  // |n_r(x)| <= C |x|^{p+delta}: the ratio stays bounded as x -> 0
  const auto n = nonlinearityByName("poly:1,0,1,3");
  const auto& r = *n.remainder();
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double x = i / 100.0;
    worst = std::max(worst, std::abs(r.value(x)) / std::pow(x, n.p() + r.delta));
    worst = std::max(worst, std::abs(r.derivative(x)) / std::pow(x, n.p() + r.delta - 1.0));
  }
  EXPECT_LT(worst, 30.0);
}

TEST(Properties, EulerIdentity) {
  // (p+1) N(x) - x n(x) vanishes for homogeneous n and is O(|x|^{p+delta+1}) otherwise
  const auto q = whithamNonlinearity();
  const auto poly = nonlinearityByName("poly:1,0,1");
  for (double x : {0.01, 0.1, 0.5}) {
    EXPECT_NEAR(3.0 * q.evalPrimitive(x) - x * q.evalN(x), 0.0, 1e-16);
    const double defect = 3.0 * poly.evalPrimitive(x) - x * poly.evalN(x);
    EXPECT_NEAR(defect, -0.4 * std::pow(x, 5), 1e-15);
  }
}

TEST(Construction, Rejections) {
  EXPECT_THROW(Nonlinearity(NonlinearityKind::PurePower, 1.5, 1.0), Error);
  EXPECT_THROW(Nonlinearity(NonlinearityKind::PurePower, 3.0, 1.0), Error);
  EXPECT_THROW(Nonlinearity(NonlinearityKind::OddPower, 3.0, -1.0), Error);
  EXPECT_THROW(Nonlinearity(NonlinearityKind::SignedModulus, 2.0, 0.0), Error);
  EXPECT_THROW(nonlinearityByName("modulus:2"), Error);
  EXPECT_THROW(nonlinearityByName("cubic"), Error);
}

TEST(Construction, ExponentWindowAtProblemAssembly) {
  // p = 2 < 4 j* + 1 = 5 for Whitham; p = 5 is excluded
  EXPECT_NO_THROW(makeProblem(whitham(), whithamNonlinearity()));
  EXPECT_NO_THROW(makeProblem(whitham(), nonlinearityByName("modulus:4.9,1")));
  try {
    makeProblem(whitham(), nonlinearityByName("oddpower:5,1"));
    FAIL() << "expected EXPONENT_WINDOW";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExponentWindow);
  }
}
