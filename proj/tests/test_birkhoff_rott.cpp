#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hydrowave/birkhoff_rott.hpp"
#include "hydrowave/domain.hpp"
#include "oracles.hpp"

using namespace hydrowave;

namespace {
constexpr double kPi = std::numbers::pi;

CurveSampling sineCurve(std::size_t n, double eps, double M = 2 * kPi) {
  const GridSpec g(n);
  RealGrid t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = eps * std::sin(g.alpha(j));
  return renormalizedCurve(t, M);
}

double oracleError(std::size_t n, const std::function<double(double)>& gam) {
  const double eps = 0.05, M = 2 * kPi;
  const GridSpec g(n);
  const CurveSampling c = sineCurve(n, eps);
  RealGrid ga(n);
  for (std::size_t j = 0; j < n; ++j) ga[j] = gam(g.alpha(j));
  const ComplexGrid w = evaluateWStar(c, ga).wStar;
  auto z = [&](double a) { return oracle::sineCurve(a, eps, M); };
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx o = oracle::birkhoffRott(g.alpha(j), 8 * j, 8 * n, M, z, gam);
    err = std::max(err, std::abs(o - w[j]));
  }
  return err;
}
}  // namespace

TEST(CotComplex, AgreesWithDirectRatioAndStaysFinite) {
  for (cplx w : {cplx(0.3, 0.2), cplx(-1.1, -0.7), cplx(2.0, 0.0), cplx(0.4, 5.0)}) {
    EXPECT_NEAR(std::abs(cotComplex(w) - std::cos(w) / std::sin(w)), 0.0, 1e-13);
  }
  const cplx big = cotComplex(cplx(0.3, 800.0));
  EXPECT_TRUE(std::isfinite(big.real()) && std::isfinite(big.imag()));
  EXPECT_NEAR(std::abs(big - cplx(0.0, -1.0)), 0.0, 1e-15);
}

TEST(WStar, FlatCurveCosineSheet) {
  const std::size_t n = 32;
  const GridSpec g(n);
  const CurveSampling c = renormalizedCurve(RealGrid(n, 0.0), 2 * kPi);
  for (int k = 1; k <= 4; ++k) {
    RealGrid ga(n);
    for (std::size_t j = 0; j < n; ++j) ga[j] = std::cos(k * g.alpha(j));
    const BirkhoffRottResult r = evaluateWStar(c, ga);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(std::abs(r.wStar[j] - cplx(0.0, -0.5 * std::sin(k * g.alpha(j)))), 0.0, 1e-10);
      EXPECT_LT(std::abs(r.remainderPart[j]), 1e-14);
    }
  }
}

TEST(WStar, FlatCurveConstantSheetIsZero) {
  const CurveSampling c = renormalizedCurve(RealGrid(16, 0.0), 2 * kPi);
  const ComplexGrid w = evaluateWStar(c, RealGrid(16, 0.8)).wStar;
  for (const cplx& x : w) EXPECT_NEAR(std::abs(x), 0.0, 1e-14);
}

TEST(WStar, SumOfParts) {
  const CurveSampling c = sineCurve(32, 0.2);
  RealGrid ga(32, 0.3);
  ga[3] = 1.0;
  const BirkhoffRottResult r = evaluateWStar(c, ga);
  for (std::size_t j = 0; j < 32; ++j) EXPECT_EQ(r.wStar[j], r.hilbertPart[j] + r.remainderPart[j]);
}

TEST(WStar, MatchesOversampledOracle) {
  EXPECT_LT(oracleError(64, [](double a) { return std::cos(a); }), 1e-8);
  EXPECT_LT(oracleError(128, [](double a) { return std::cos(a); }), 1e-8);
}

TEST(WStar, SuperalgebraicConvergence) {
  // A sheet strength with a pole near the real axis keeps the error above roundoff at n = 64.
  auto gam = [](double a) { return 1.0 / (1.0 - 0.9 * std::cos(a)); };
  const double e32 = oracleError(32, gam), e64 = oracleError(64, gam), e128 = oracleError(128, gam);
  EXPECT_GT(e32 / e64, 4.0);
  EXPECT_GT(e64 / e128, 4.0);
  // Ratios themselves grow, which rules out any fixed algebraic order.
  EXPECT_GT(e64 / e128, e32 / e64);
  EXPECT_LT(e128, 1e-8);
}

TEST(WStar, LinearInGamma) {
  const CurveSampling c = sineCurve(32, 0.3);
  std::mt19937 rng(3);
  std::normal_distribution<double> N(0.0, 1.0);
  RealGrid ga(32), g2(32);
  for (std::size_t j = 0; j < 32; ++j) {
    ga[j] = N(rng);
    g2[j] = 2.0 * ga[j];
  }
  const ComplexGrid w1 = evaluateWStar(c, ga).wStar, w2 = evaluateWStar(c, g2).wStar;
  for (std::size_t j = 0; j < 32; ++j) EXPECT_NEAR(std::abs(w2[j] - 2.0 * w1[j]), 0.0, 1e-13);
}

TEST(WStar, HorizontalTranslationInvariance) {
  CurveSampling c = sineCurve(32, 0.3);
  RealGrid ga(32);
  for (std::size_t j = 0; j < 32; ++j) ga[j] = 1.0 + std::cos(2.0 * j);
  const ComplexGrid w1 = evaluateWStar(c, ga).wStar;
  for (double& x : c.zRe) x += 0.37;
  const ComplexGrid w2 = evaluateWStar(c, ga).wStar;
  for (std::size_t j = 0; j < 32; ++j) EXPECT_NEAR(std::abs(w2[j] - w1[j]), 0.0, 1e-13);
}

TEST(WStar, CoincidentNodesAreSingular) {
  CurveSampling c = sineCurve(16, 0.1);
  c.zRe[5] = c.zRe[2];
  c.zIm[5] = c.zIm[2];
  EXPECT_THROW(evaluateWStar(c, RealGrid(16, 1.0)), Error);
}

TEST(WStar, RequiresMatchingSizes) {
  const CurveSampling c = sineCurve(16, 0.1);
  EXPECT_THROW(evaluateWStar(c, RealGrid(8, 1.0)), Error);
}

TEST(Components, FlatCurve) {
  const std::size_t n = 16;
  const GridSpec g(n);
  const CurveSampling c = renormalizedCurve(RealGrid(n, 0.0), 2 * kPi);
  ComplexGrid w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = cplx(0.0, -0.5 * std::sin(3 * g.alpha(j)));
  const RealGrid nn = normalComponent(c, w), tt = tangentComponent(c, w);
  for (std::size_t j = 0; j < n; ++j) {
    EXPECT_NEAR(nn[j], 0.5 * std::sin(3 * g.alpha(j)), 1e-15);
    EXPECT_NEAR(tt[j], 0.0, 1e-15);
  }
}

TEST(Components, ZeroAndRandomOnFlatCurve) {
  const std::size_t n = 16;
  const CurveSampling c = renormalizedCurve(RealGrid(n, 0.0), 2 * kPi);
  const ComplexGrid zero(n);
  for (double x : normalComponent(c, zero)) EXPECT_EQ(x, 0.0);
  for (double x : tangentComponent(c, zero)) EXPECT_EQ(x, 0.0);
  std::mt19937 rng(5);
  std::normal_distribution<double> N(0.0, 1.0);
  ComplexGrid w(n);
  for (auto& x : w) x = cplx(N(rng), N(rng));
  const RealGrid nn = normalComponent(c, w), tt = tangentComponent(c, w);
  for (std::size_t j = 0; j < n; ++j) {
    EXPECT_NEAR(nn[j], (w[j] * cplx(0.0, 1.0)).real(), 1e-15);
    EXPECT_NEAR(tt[j], w[j].real(), 1e-15);
  }
}
