#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "hydrowave/linear_analysis.hpp"

using namespace hydrowave;

namespace {
constexpr double kPi = std::numbers::pi;

PhysicalParams resonant12() {
  PhysicalParams p;
  p.S = 1.0 / 9.0;
  p.A = 1.0;
  p.tau1 = 2.0;
  return p;
}

PhysicalParams resonant23() {
  PhysicalParams p = resonant12();
  p.S = 1.0 / 63.0;
  return p;
}

// Bisection on a sign change; independent of the library's closed forms.
template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST(LambdaK, VanishesAtBothSpeeds) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    PhysicalParams p;
    p.S = 0.01 + U(rng);
    p.A = 2 * U(rng) - 1;
    p.tau1 = 0.1 + 3 * U(rng);
    p.gammaBar = U(rng) - 0.5;
    p.M = (1 + 2 * U(rng)) * kPi;
    for (long k = 1; k <= 20; ++k) {
      const auto s = cPM(k, p);
      if (!s) continue;
      EXPECT_NEAR(lambdaK(k, s->first, p), 0.0, 1e-10);
      EXPECT_NEAR(lambdaK(k, s->second, p), 0.0, 1e-10);
    }
  }
}

TEST(LambdaK, ResonantSpeedMatchesRootFind) {
  const PhysicalParams p = resonant12();
  const double c = bisect([&](double x) { return lambdaK(1, x, p); }, 0.5, 2.0);
  EXPECT_NEAR(c * c, 7.0 / 6.0, 1e-12);
  EXPECT_NEAR(cPM(1, p)->first, std::sqrt(7.0 / 6.0), 1e-14);
  EXPECT_NEAR(cPM(1, p)->second, -std::sqrt(7.0 / 6.0), 1e-14);
  EXPECT_NEAR(cPM(2, p)->first, std::sqrt(7.0 / 6.0), 1e-14);
}

TEST(Rpoly, ClosedValueAndNegativeCase) {
  PhysicalParams p = resonant12();
  EXPECT_NEAR(Rpoly(1, p), 56.0 * std::pow(kPi, 4) / 3.0, 1e-10);
  p.A = -1.0;
  p.S = 1e-3;
  p.tau1 = 0.1;
  EXPECT_LT(Rpoly(1, p), 0.0);
  EXPECT_FALSE(cPM(1, p).has_value());
  EXPECT_THROW(speedFor(1, p, SpeedBranch::Plus), Error);
  EXPECT_THROW(kernelClassify(1, p), Error);
  EXPECT_THROW(lambdaK(0, 1.0, p), Error);
}

TEST(Ppoly, ResonanceIdentities) {
  EXPECT_NEAR(ppoly(2, 1, resonant12()), 0.0, 1e-10);
  EXPECT_NEAR(ppoly(3, 2, resonant23()), 0.0, 1e-10);
  EXPECT_NEAR(ppoly(1, 2, resonant12()), 0.0, 1e-10);
}

TEST(Ppoly, IncreasingInPositiveL) {
  const PhysicalParams p = resonant12();
  for (double k : {1.0, 2.0, 5.0}) {
    double prev = ppoly(0.0, k, p);
    for (double l = 0.1; l < 20; l += 0.1) {
      const double v = ppoly(l, k, p);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(ResonantS, MatchesRootFindAndPartnerRoot) {
  for (int n = 2; n <= 10; ++n) {
    for (double tau : {0.5, 2.0}) {
      const double S = resonantS(n, 1.0, tau);
      PhysicalParams p = resonant12();
      p.tau1 = tau;
      const double Sref = bisect(
          [&](double s) {
            PhysicalParams q = p;
            q.S = s;
            return ppoly(n, 1, q);
          },
          1e-8, 10.0);
      EXPECT_NEAR(S, Sref, 1e-12 * Sref);
      p.S = S;
      EXPECT_NEAR(partnerRoot(1, p), n, 1e-9 * n);
    }
  }
  EXPECT_NEAR(resonantS(2, 1.0, 2.0), 1.0 / 9.0, 1e-15);
}

TEST(KernelClassify, TwoDimensionalAtResonance) {
  const ModeAnalysis m1 = kernelClassify(1, resonant12());
  EXPECT_EQ(m1.kernelDim, 2);
  ASSERT_TRUE(m1.partner.has_value());
  EXPECT_EQ(*m1.partner, 2);
  const ModeAnalysis m2 = kernelClassify(2, resonant12());
  EXPECT_EQ(m2.kernelDim, 2);
  EXPECT_EQ(*m2.partner, 1);
  const ModeAnalysis m3 = kernelClassify(2, resonant23());
  EXPECT_EQ(m3.kernelDim, 2);
  EXPECT_EQ(*m3.partner, 3);
  EXPECT_EQ(*kernelClassify(3, resonant23()).partner, 2);
  EXPECT_EQ(kernelClassify(3, resonant12()).kernelDim, 1);
}

TEST(KernelClassify, OneDimensionalOffResonance) {
  PhysicalParams p = resonant12();
  p.S = 0.1;
  for (long k = 1; k <= 10; ++k) {
    const ModeAnalysis m = kernelClassify(k, p);
    EXPECT_EQ(m.kernelDim, 1) << k;
    EXPECT_FALSE(m.partner.has_value());
    EXPECT_NEAR(m.lambda, 0.0, 1e-12);
    EXPECT_NEAR(m.cMinus, -m.cPlus, 1e-14);
  }
}

TEST(KernelClassify, PartnerRelationIsSymmetric) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    PhysicalParams p;
    p.tau1 = U(rng);
    const int n = 2 + trial % 6;
    p.S = resonantS(n, 1.0, p.tau1);
    const ModeAnalysis m = kernelClassify(1, p);
    ASSERT_TRUE(m.partner.has_value());
    EXPECT_EQ(*m.partner, n);
    const ModeAnalysis back = kernelClassify(n, p);
    ASSERT_TRUE(back.partner.has_value());
    EXPECT_EQ(*back.partner, 1);
    EXPECT_NEAR(m.cPlus, back.cPlus, 1e-12);
  }
}

TEST(Symbol, AnnihilatesKernelDirection) {
  PhysicalParams p = resonant12();
  p.Atilde = 0.3;
  for (long k = 1; k <= 5; ++k) {
    const double c = speedFor(k, p, SpeedBranch::Plus);
    const auto v = kernelDirection(c, p);
    const auto Lv = linearizationSymbol(k, c, p).apply(v);
    EXPECT_LT(std::abs(Lv[0]) + std::abs(Lv[1]), 1e-12) << k;
  }
  EXPECT_THROW(kernelDirection(0.0, p), Error);
  EXPECT_THROW(linearizationSymbol(0, 1.0, p), Error);
}

TEST(Symbol, TendsToIdentityAtHighWavenumber) {
  const PhysicalParams p = resonant12();
  const auto L = linearizationSymbol(100000, 1.2, p);
  EXPECT_NEAR(std::abs(L.entry[0][0] - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(L.entry[1][1] - 1.0), 0.0, 1e-8);
  EXPECT_LT(std::abs(L.entry[0][1]), 1e-8);
  EXPECT_LT(std::abs(L.entry[1][0]), 1e-8);
}

TEST(Symbol, HasLambdaAsEigenvalue) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    PhysicalParams p;
    p.S = 0.05 + U(rng);
    p.A = 2 * U(rng) - 1;
    p.tau1 = 0.1 + 2 * U(rng);
    const double c = 0.3 + 2 * U(rng);
    const long k = 1 + trial % 6;
    const auto L = linearizationSymbol(k, c, p);
    Eigen::Matrix2cd m;
    m << L.entry[0][0], L.entry[0][1], L.entry[1][0], L.entry[1][1];
    const Eigen::Vector2cd ev = m.eigenvalues();
    const double lam = lambdaK(k, c, p);
    const double dist = std::min(std::abs(ev[0] - lam), std::abs(ev[1] - lam));
    EXPECT_LT(dist, 1e-10 * std::max(1.0, std::abs(lam))) << trial;
  }
}

TEST(AdjointScale, ClosedForms) {
  PhysicalParams p = resonant12();
  const double c = std::sqrt(7.0 / 6.0);
  const AdjointScale s = adjointEigenfunctionScale(2, c, p);
  const double M = 2 * kPi;
  EXPECT_NEAR(s.n, M * M * M + 2 * M * kPi * kPi * p.S * p.tau1 * 4, 1e-10);
  EXPECT_NEAR(s.d, -c * M, 1e-14);
  p.gammaBar = 0.2;
  const AdjointScale g = adjointEigenfunctionScale(1, c, p);
  EXPECT_NEAR(g.n, M * M * M + (2 * c * 0.2 * M * kPi * kPi - 2 * 0.04 * kPi * kPi * kPi) + 2 * M * kPi * kPi * p.S * p.tau1,
              1e-10);
  EXPECT_NEAR(g.d, -c * M + 0.2 * kPi, 1e-14);
  EXPECT_THROW(adjointEigenfunctionScale(0, c, p), Error);
}

TEST(Transversality, NonzeroWithBranchSignFlip) {
  for (const auto& [p, k, l] : {std::tuple{resonant12(), 1L, 2L}, std::tuple{resonant23(), 2L, 3L}}) {
    const double dp = transversalityDeterminant(k, l, p, SpeedBranch::Plus);
    const double dm = transversalityDeterminant(k, l, p, SpeedBranch::Minus);
    EXPECT_TRUE(std::isfinite(dp));
    EXPECT_GT(std::abs(dp), 1e-8);
    EXPECT_LT(dp * dm, 0.0);
    EXPECT_EQ(transversalityDeterminant(k, k, p), 0.0);
    EXPECT_EQ(transversalityDeterminant(l, l, p), 0.0);
  }
  EXPECT_THROW(transversalityDeterminant(1, 3, resonant12()), Error);
}
