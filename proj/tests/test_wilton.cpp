#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hydrowave/residual.hpp"
#include "hydrowave/wilton.hpp"

using namespace hydrowave;

namespace {
PhysicalParams resonant(double Atilde = 0.2) {
  PhysicalParams p;
  p.S = 1.0 / 9.0;
  p.A = 1.0;
  p.tau1 = 2.0;
  p.Atilde = Atilde;
  return p;
}

// Newton on the two solvability conditions in (c1, t2), started from a
// rough guess on the requested sign branch.
std::pair<double, double> solveSolvability(double c0, const PhysicalParams& p, int sign) {
  const double A = p.A, At = p.Atilde;
  double c1 = sign * 0.5, t2 = sign * 1.0;
  for (int it = 0; it < 100; ++it) {
    const double f1 = -2 * At * t2 + 2 * A * t2 * c0 * c0 - 4 * c0 * c1;
    const double f2 = 2 * At + 4 * A * c0 * c0 - 8 * t2 * c0 * c1;
    const double j11 = -4 * c0, j12 = -2 * At + 2 * A * c0 * c0;
    const double j21 = -8 * t2 * c0, j22 = -8 * c0 * c1;
    const double det = j11 * j22 - j12 * j21;
    c1 -= (f1 * j22 - f2 * j12) / det;
    t2 -= (j11 * f2 - j21 * f1) / det;
  }
  return {c1, t2};
}
}  // namespace

TEST(LinearSpeed, ResonantValueAndAgreement) {
  const PhysicalParams p = resonant();
  EXPECT_NEAR(linearSpeedC0(1, p), std::sqrt(7.0 / 6.0), 1e-15);
  EXPECT_NEAR(linearSpeedC0(2, p), std::sqrt(7.0 / 6.0), 1e-14);
  for (long k = 1; k <= 10; ++k) EXPECT_NEAR(linearSpeedC0(k, p), cPM(k, p)->first, 1e-13) << k;
}

TEST(LinearSpeed, GravityOnlyLimit) {
  PhysicalParams p = resonant();
  p.S = 1e-15;
  EXPECT_NEAR(linearSpeedC0(1, p), 1.0, 1e-12);
  PhysicalParams m = resonant();
  m.M = 4.0 * std::numbers::pi;
  EXPECT_THROW(linearSpeedC0(1, m), Error);
}

TEST(Wilton, CoefficientsMatchSolvabilityNewton) {
  for (double At : {0.0, 0.01, 0.2, 1.0}) {
    const PhysicalParams p = resonant(At);
    for (int sign : {1, -1}) {
      const WiltonCoefficients w = wiltonCoefficients(p, sign);
      const auto [c1, t2] = solveSolvability(w.c0, p, sign);
      EXPECT_NEAR(w.c1, c1, 1e-12) << At;
      EXPECT_NEAR(w.t2, t2, 1e-12) << At;
      EXPECT_EQ(w.signBranch, sign);
    }
  }
}

TEST(Wilton, SignBranchesAreMirrored) {
  const WiltonCoefficients wp = wiltonCoefficients(resonant(), 1), wm = wiltonCoefficients(resonant(), -1);
  EXPECT_GT(wp.c1, 0.0);
  EXPECT_GT(wp.t2, 0.0);
  EXPECT_EQ(wm.c1, -wp.c1);
  EXPECT_EQ(wm.t2, -wp.t2);
  EXPECT_EQ(wm.c0, wp.c0);
  EXPECT_THROW(wiltonCoefficients(resonant(), 0), Error);
}

TEST(Wilton, SolvabilityHoldsOverRandomTuples) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int tested = 0;
  while (tested < 200) {
    PhysicalParams p;
    p.A = 0.05 + 0.95 * U(rng);
    p.tau1 = 0.1 + 3.0 * U(rng);
    p.S = resonantS(2, p.A, p.tau1);
    const double c0 = linearSpeedC0(1, p);
    p.Atilde = 0.999 * p.A * c0 * c0 * U(rng);
    const WiltonCoefficients w = wiltonCoefficients(p, tested % 2 ? 1 : -1);
    const auto [r1, r2] = w.solvabilityResiduals(p);
    EXPECT_LE(std::abs(r1), 1e-12);
    EXPECT_LE(std::abs(r2), 1e-12);
    ++tested;
  }
}

TEST(Wilton, SpeedCorrectionVanishesTowardBoundary) {
  PhysicalParams p = resonant();
  const double c0 = linearSpeedC0(1, p);
  double prev = INFINITY;
  for (double gap : {1e-2, 1e-4, 1e-6, 1e-8}) {
    p.Atilde = p.A * c0 * c0 * (1.0 - gap);
    const double c1 = wiltonCoefficients(p, 1).c1;
    EXPECT_LT(c1, prev);
    prev = c1;
  }
  EXPECT_LT(prev, 1e-3);
  // At the boundary itself t2 is singular, so the expansion does not exist.
  p.Atilde = p.A * c0 * c0;
  EXPECT_THROW(wiltonCoefficients(p, 1), Error);
}

TEST(Wilton, NonexistenceAndPreconditions) {
  PhysicalParams p = resonant();
  p.Atilde = 5.0;
  try {
    wiltonCoefficients(p, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WiltonNonexistence);
  }
  PhysicalParams off = resonant();
  off.S = 0.1;
  EXPECT_THROW(wiltonCoefficients(off, 1), Error);
  PhysicalParams g = resonant();
  g.gammaBar = 0.1;
  EXPECT_THROW(wiltonCoefficients(g, 1), Error);
}

TEST(Wilton, GuessResidualIsSecondOrder) {
  const PhysicalParams p = resonant();
  const GridSpec grid(64);
  for (int sign : {1, -1}) {
    const WiltonCoefficients w = wiltonCoefficients(p, sign);
    double prev = 0.0;
    for (double eps : {1e-2, 5e-3, 2.5e-3, 1e-3}) {
      const SpectralWaveState s = wiltonInitialGuess(eps, w, 15);
      EXPECT_DOUBLE_EQ(s.a[0], -2.0 * eps);
      EXPECT_DOUBLE_EQ(s.b[1], 4.0 * eps * w.c0 * w.t2);
      const double r = travelingWaveResidual(s, p, AmplitudeConstraint::displacement(0.0), grid).waveNorm();
      EXPECT_LE(r, 50.0 * eps * eps) << eps;
      if (prev > 0.0) {
        EXPECT_GT(prev / r, 3.0);
      }
      prev = r;
    }
  }
  EXPECT_THROW(wiltonInitialGuess(0.01, wiltonCoefficients(p, 1), 1), Error);
}

TEST(Stokes, GuessIsSingleModeAndNearlyExact) {
  PhysicalParams p = resonant();
  p.S = 1.0 / 63.0;
  p.Atilde = 0.1;
  const GridSpec grid(64);
  const SpectralWaveState s = stokesInitialGuess(2, 1e-4, p, 15);
  for (std::size_t k = 0; k < 15; ++k) {
    if (k == 1) continue;
    EXPECT_EQ(s.a[k], 0.0);
    EXPECT_EQ(s.b[k], 0.0);
  }
  EXPECT_EQ(s.b[1], 1e-4);
  EXPECT_NEAR(s.a[1], -1e-4 * std::numbers::pi / (s.c * p.M), 1e-18);
  EXPECT_LE(travelingWaveResidual(s, p, AmplitudeConstraint::displacement(0.0), grid).waveNorm(), 1e-6);
  const SpectralWaveState flat = stokesInitialGuess(2, 0.0, p, 15);
  EXPECT_EQ(travelingWaveResidual(flat, p, AmplitudeConstraint::displacement(0.0), grid).maxNorm(), 0.0);
  EXPECT_THROW(stokesInitialGuess(16, 1e-3, p, 15), Error);
}

TEST(Stokes, AmplitudeForDisplacementInvertsLinearTheory) {
  PhysicalParams p = resonant();
  p.S = 0.1;
  const GridSpec grid(128);
  for (long k : {1L, 2L, 3L}) {
    const double h = 1e-5;
    const double eps = stokesAmplitudeForDisplacement(k, h, p);
    const SpectralWaveState s = stokesInitialGuess(k, eps, p, 31);
    const double measured = displacement(renormalizedCurve(synthesize(s, grid, 0.0).theta, p.M));
    EXPECT_NEAR(measured, h, 1e-9) << k;
  }
}
