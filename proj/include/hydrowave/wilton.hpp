#pragma once

// Small-amplitude expansions for the (1,2) Wilton ripple and single-mode
// Stokes initial guesses.

#include <cmath>
#include <numbers>
#include <string>

#include "hydrowave/domain.hpp"
#include "hydrowave/errors.hpp"
#include "hydrowave/linear_analysis.hpp"

namespace hydrowave {

namespace wilton_detail {
inline void requireSectionAssumptions(const PhysicalParams& p) {
  if (p.gammaBar != 0.0 || std::abs(p.M - 2.0 * std::numbers::pi) > 1e-14) {
    throw Error(ErrorKind::Precondition, "Wilton expansion assumes gammaBar = 0 and M = 2 pi");
  }
}
}  // namespace wilton_detail

/// Positive linear speed of wavenumber k for M = 2 pi, gammaBar = 0.
inline double linearSpeedC0(long k, const PhysicalParams& p) {
  wilton_detail::requireSectionAssumptions(p);
  const double kk = std::abs(static_cast<double>(k));
  if (kk == 0.0) throw Error(ErrorKind::Precondition, "k must be nonzero");
  const double radicand = p.S * kk * kk * kk / 2.0 + p.S * p.tau1 * kk / 2.0 + p.A / kk;
  if (radicand < 0.0) throw Error(ErrorKind::NoTravelingWave, "negative linear speed radicand");
  return std::sqrt(radicand);
}

struct WiltonCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double t2 = 0.0;
  int signBranch = 1;

  /// Residuals of the two solvability conditions at (c1, t2).
  std::pair<double, double> solvabilityResiduals(const PhysicalParams& p) const {
    const double A = p.A, At = p.Atilde;
    return {-2.0 * At * t2 + 2.0 * A * t2 * c0 * c0 - 4.0 * c0 * c1,
            2.0 * At + 4.0 * A * c0 * c0 - 8.0 * t2 * c0 * c1};
  }
};

inline WiltonCoefficients wiltonCoefficients(const PhysicalParams& p, int signBranch) {
  wilton_detail::requireSectionAssumptions(p);
  if (signBranch != 1 && signBranch != -1) throw Error(ErrorKind::Precondition, "signBranch must be +1 or -1");
  const double scale = std::max(1.0, std::abs(p.A) * std::pow(2.0 * std::numbers::pi, 4));
  if (std::abs(ppoly(2.0, 1.0, p)) > 1e-9 * scale) {
    throw Error(ErrorKind::Precondition, "parameters are not at the (1,2) resonance");
  }
  WiltonCoefficients w;
  w.signBranch = signBranch;
  w.c0 = linearSpeedC0(1, p);
  const double Ac2 = p.A * w.c0 * w.c0;
  const double At = p.Atilde;
  const double product = (Ac2 - At) * (2.0 * Ac2 + At);
  if (product < 0.0) throw Error(ErrorKind::WiltonNonexistence, "(A c0^2 - Atilde)(2 A c0^2 + Atilde) < 0");
  if (2.0 * Ac2 - 2.0 * At == 0.0) throw Error(ErrorKind::WiltonNonexistence, "t2 is singular at A c0^2 = Atilde");
  const double ratio = (2.0 * Ac2 + At) / (2.0 * Ac2 - 2.0 * At);
  if (ratio < 0.0) throw Error(ErrorKind::WiltonNonexistence, "t2 radicand is negative");
  w.c1 = signBranch * std::sqrt(product) / (2.0 * std::sqrt(2.0) * w.c0);
  w.t2 = signBranch * std::sqrt(ratio);
  return w;
}

/// theta = eps(-2 sin a - 2 t2 sin 2a), gamma = eps(4 c0 cos a + 4 c0 t2 cos 2a), c = c0 + eps c1.
inline SpectralWaveState wiltonInitialGuess(double eps, const WiltonCoefficients& w, std::size_t K) {
  if (K < 2) throw Error(ErrorKind::Precondition, "Wilton guess needs K >= 2");
  SpectralWaveState s(K, w.c0 + eps * w.c1);
  s.a[0] = -2.0 * eps;
  s.a[1] = -2.0 * eps * w.t2;
  s.b[0] = 4.0 * eps * w.c0;
  s.b[1] = 4.0 * eps * w.c0 * w.t2;
  return s;
}

/// eps * (-pi/(cM) sin k a, cos k a) at c = c_pm(k).
inline SpectralWaveState stokesInitialGuess(long k, double eps, const PhysicalParams& p, std::size_t K,
                                            SpeedBranch branch = SpeedBranch::Plus) {
  if (k < 1 || static_cast<std::size_t>(k) > K) throw Error(ErrorKind::Precondition, "Stokes mode must lie in 1..K");
  const double c = speedFor(k, p, branch);
  if (c == 0.0) throw Error(ErrorKind::DegenerateSpeed, "Stokes guess at zero speed");
  SpectralWaveState s(K, c);
  s.a[static_cast<std::size_t>(k) - 1] = -eps * std::numbers::pi / (c * p.M);
  s.b[static_cast<std::size_t>(k) - 1] = eps;
  return s;
}

/// Linear-theory eps giving total displacement h for the Stokes guess of mode k.
inline double stokesAmplitudeForDisplacement(long k, double h, const PhysicalParams& p,
                                             SpeedBranch branch = SpeedBranch::Plus) {
  const double c = speedFor(k, p, branch);
  // y ~ (M/2pi) int theta, so a_k sin(k a) lifts to amplitude (M/2pi)|a_k|/k.
  const double thetaPerEps = std::numbers::pi / std::abs(c * p.M);
  const double yAmpPerEps = p.M / (2.0 * std::numbers::pi) * thetaPerEps / static_cast<double>(k);
  return h / (2.0 * yAmpPerEps);
}

}  // namespace hydrowave
