#pragma once

// Closed-form linear theory about the flat state: dispersion relation,
// kernel dimension, Fourier symbols of the linearized map, adjoint
// eigenfunction scales and the transversality determinant.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <utility>

#include "hydrowave/domain.hpp"
#include "hydrowave/errors.hpp"

namespace hydrowave {

namespace linear_detail {
inline constexpr double pi = std::numbers::pi;
inline void requirePositive(long k, const char* what) {
  if (k < 1) throw Error(ErrorKind::Precondition, std::string(what) + " must be >= 1");
}
}  // namespace linear_detail

enum class SpeedBranch { Plus, Minus };

/// Eigenvalue lambda_k(c, tau1) of the linearization at the flat state.
inline double lambdaK(long k, double c, const PhysicalParams& p) {
  using linear_detail::pi;
  linear_detail::requirePositive(k, "k");
  const double kk = static_cast<double>(k);
  const double M = p.M, g = p.gammaBar;
  const double t2 = M * M * p.tau1 / (4.0 * pi * pi);
  const double t3 = (-c * c * M * M * M + 2.0 * p.A * c * g * M * M * pi - g * g * M * pi * pi) / (4.0 * pi * pi * pi * p.S);
  const double t4 = p.A * M * M * M * M / (8.0 * pi * pi * pi * pi * p.S);
  return 1.0 + t2 / (kk * kk) + t3 / (kk * kk * kk) + t4 / (kk * kk * kk * kk);
}

inline double Rpoly(long k, const PhysicalParams& p) {
  using linear_detail::pi;
  linear_detail::requirePositive(k, "k");
  const double kk = static_cast<double>(k);
  const double M = p.M, g = p.gammaBar;
  return p.A * M * M * M * M + 2.0 * ((p.A * p.A - 1.0) * g * g * M * pi * pi * pi) * kk +
         2.0 * M * M * pi * pi * p.S * p.tau1 * kk * kk + 8.0 * pi * pi * pi * pi * p.S * kk * kk * kk * kk;
}

/// p(l, k; tau1); real-valued in l so the root finder can probe non-integers.
inline double ppoly(double l, double k, const PhysicalParams& p) {
  using linear_detail::pi;
  const double M = p.M;
  return -p.A * M * M * M * M + 2.0 * k * l * pi * pi * p.S * (4.0 * (k * k + k * l + l * l) * pi * pi + M * M * p.tau1);
}

/// Speeds at which lambda_k vanishes, or nullopt when R(k) < 0.
inline std::optional<std::pair<double, double>> cPM(long k, const PhysicalParams& p) {
  using linear_detail::pi;
  const double R = Rpoly(k, p);
  if (R < 0.0) return std::nullopt;
  const double mid = p.A * p.gammaBar * pi / p.M;
  const double half = std::sqrt(R / (2.0 * static_cast<double>(k) * p.M * p.M * p.M * pi));
  return std::make_pair(mid + half, mid - half);
}

inline double speedFor(long k, const PhysicalParams& p, SpeedBranch branch) {
  const auto speeds = cPM(k, p);
  if (!speeds) throw Error(ErrorKind::NoTravelingWave, "R(k) < 0 for k = " + std::to_string(k));
  return branch == SpeedBranch::Plus ? speeds->first : speeds->second;
}

/// Bending modulus at which wavenumbers 1 and n share a linear speed (M = 2 pi).
inline double resonantS(int n, double A, double tau) {
  if (n < 2) throw Error(ErrorKind::Precondition, "resonance harmonic must be >= 2");
  if (!(A > 0.0)) throw Error(ErrorKind::Precondition, "resonance requires A > 0");
  const double nn = static_cast<double>(n);
  return 2.0 * A / (nn * (nn * nn + nn + 1.0 + tau));
}

/// The single real root of l -> p(l, k; tau1).
inline double partnerRoot(long k, const PhysicalParams& p) {
  linear_detail::requirePositive(k, "k");
  const double kk = static_cast<double>(k);
  // p is a cubic in l with positive leading coefficient and no critical points.
  double lo = -1.0, hi = 1.0;
  while (ppoly(lo, kk, p) > 0.0) lo *= 2.0;
  while (ppoly(hi, kk, p) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (ppoly(mid, kk, p) < 0.0 ? lo : hi) = mid;
  }
  double l = 0.5 * (lo + hi);
  // Newton polish.
  for (int it = 0; it < 3; ++it) {
    const double h = 1e-6 * std::max(1.0, std::abs(l));
    const double d = (ppoly(l + h, kk, p) - ppoly(l - h, kk, p)) / (2.0 * h);
    if (d == 0.0) break;
    const double next = l - ppoly(l, kk, p) / d;
    if (!std::isfinite(next)) break;
    l = next;
  }
  return l;
}

struct ModeAnalysis {
  long k = 1;
  double lambda = 0.0;  // lambda_k at c_plus
  double cPlus = 0.0;
  double cMinus = 0.0;
  double Rval = 0.0;
  double partnerRoot = 0.0;
  int kernelDim = 1;
  std::optional<long> partner;
};

inline ModeAnalysis kernelClassify(long k, const PhysicalParams& p) {
  using linear_detail::pi;
  ModeAnalysis m;
  m.k = k;
  m.Rval = Rpoly(k, p);
  const auto speeds = cPM(k, p);
  if (!speeds) throw Error(ErrorKind::NoTravelingWave, "R(k) < 0 for k = " + std::to_string(k));
  m.cPlus = speeds->first;
  m.cMinus = speeds->second;
  m.lambda = lambdaK(k, m.cPlus, p);
  m.partnerRoot = partnerRoot(k, p);
  const double rounded = std::round(m.partnerRoot);
  if (rounded >= 1.0 && static_cast<long>(rounded) != k && std::abs(m.partnerRoot - rounded) <= 1e-8 * std::max(1.0, rounded)) {
    const double kk = static_cast<double>(k);
    const double M = p.M;
    const double scale = std::max(std::abs(p.A * M * M * M * M),
                                  std::abs(2.0 * kk * rounded * pi * pi * p.S *
                                           (4.0 * (kk * kk + kk * rounded + rounded * rounded) * pi * pi + M * M * p.tau1)));
    if (std::abs(ppoly(rounded, kk, p)) <= 1e-9 * scale) {
      m.kernelDim = 2;
      m.partner = static_cast<long>(rounded);
    }
  }
  return m;
}

/// 2x2 Fourier symbol of the linearized identity-plus-compact map at wavenumber
/// k (k != 0), acting on complex (theta_hat, gamma_hat).
struct LinearizationSymbol {
  std::array<std::array<cplx, 2>, 2> entry{};

  std::array<cplx, 2> apply(const std::array<cplx, 2>& v) const {
    return {entry[0][0] * v[0] + entry[0][1] * v[1], entry[1][0] * v[0] + entry[1][1] * v[1]};
  }
};

inline LinearizationSymbol linearizationSymbol(long k, double c, const PhysicalParams& p) {
  using linear_detail::pi;
  if (k == 0) throw Error(ErrorKind::Precondition, "symbol defined for k != 0");
  const double kk = static_cast<double>(k);
  const double ak = std::abs(kk);
  const double sg = kk > 0 ? 1.0 : -1.0;
  const double M = p.M, g = p.gammaBar, S = p.S, A = p.A, t = p.tau1;
  const cplx i{0.0, 1.0};
  LinearizationSymbol L;
  L.entry[0][0] = 1.0 - g * M / (4.0 * pi * S) * (g - c * A * M / pi) / (ak * ak * ak) +
                  A * std::pow(M, 4) / (8.0 * std::pow(pi, 4) * S) / std::pow(kk, 4) +
                  t * M * M / (4.0 * pi * pi) / (kk * kk);
  L.entry[0][1] = i * M * M / (4.0 * pi * pi * S) * (pi * A * g / M - c) / (kk * kk * kk);
  L.entry[1][0] = i * c * g * M * M / (4.0 * pi * pi * S) * (g - c * A * M / pi) / (kk * kk * kk) -
                  i * c * A * std::pow(M, 5) / (8.0 * std::pow(pi, 5) * S) * sg / std::pow(kk, 4) -
                  i * c * t * M * M * M / (4.0 * pi * pi * pi) * sg / (kk * kk);
  L.entry[1][1] = 1.0 + c * M * M / (4.0 * pi * pi * S) * (A * g - c * M / pi) / (ak * ak * ak);
  return L;
}

/// Kernel direction (-pi/(cM) sin k alpha, cos k alpha) in positive-k Fourier
/// coordinates, normalized so the gamma component is 1.
inline std::array<cplx, 2> kernelDirection(double c, const PhysicalParams& p) {
  if (c == 0.0) throw Error(ErrorKind::DegenerateSpeed, "kernel direction undefined at c = 0");
  return {cplx{0.0, std::numbers::pi / (c * p.M)}, cplx{1.0, 0.0}};
}

struct AdjointScale {
  double n = 0.0;
  double d = 0.0;
};

inline AdjointScale adjointEigenfunctionScale(long j, double c, const PhysicalParams& p) {
  using linear_detail::pi;
  linear_detail::requirePositive(j, "j");
  const double jj = static_cast<double>(j);
  const double M = p.M, g = p.gammaBar;
  AdjointScale s;
  s.n = p.A * M * M * M + (2.0 * p.A * c * g * M * pi * pi - 2.0 * g * g * pi * pi * pi) * jj +
        2.0 * M * pi * pi * p.S * p.tau1 * jj * jj;
  s.d = -c * M + p.A * g * pi;
  return s;
}

/// Determinant of the (c, tau1)-derivative matrix of the reduced bifurcation
/// equations at a two-dimensional kernel. The leading sign is + for the c_plus
/// branch and - for c_minus.
inline double transversalityDeterminant(long k, long l, const PhysicalParams& p, SpeedBranch branch = SpeedBranch::Plus) {
  using linear_detail::pi;
  linear_detail::requirePositive(k, "k");
  linear_detail::requirePositive(l, "l");
  const double R = Rpoly(k, p);
  if (!(R > 0.0)) throw Error(ErrorKind::Precondition, "transversality requires R(k) > 0");
  const double kk = static_cast<double>(k), ll = static_cast<double>(l);
  const double scale = std::max(std::abs(p.A * std::pow(p.M, 4)), 1.0);
  if (k != l && std::abs(ppoly(ll, kk, p)) > 1e-9 * scale * std::max(1.0, std::pow(std::max(kk, ll), 3))) {
    throw Error(ErrorKind::Precondition, "transversality requires p(l, k) = 0");
  }
  const double c = speedFor(k, p, branch);
  const AdjointScale sk = adjointEigenfunctionScale(k, c, p);
  const AdjointScale sl = adjointEigenfunctionScale(l, c, p);
  const double ak = -sk.n / (2.0 * pi * pi * kk);
  const double al = -sl.n / (2.0 * pi * pi * ll);
  const double d = sk.d;
  const double sign = branch == SpeedBranch::Plus ? 1.0 : -1.0;
  return sign * (kk - ll) * p.S * std::sqrt(2.0 * pi * R) /
         (c * c * (ak * ak + d * d) * (al * al + d * d) * std::sqrt(kk * p.M));
}

}  // namespace hydrowave
