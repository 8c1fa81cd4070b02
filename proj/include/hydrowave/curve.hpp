#pragma once

// Renormalized interface curve built from the tangent angle, plus the
// geometric diagnostics used along branches.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "hydrowave/domain.hpp"
#include "hydrowave/errors.hpp"
#include "hydrowave/spectral.hpp"

namespace hydrowave {

struct CurveSampling {
  RealGrid zRe;
  RealGrid zIm;
  ComplexGrid zAlpha;
  double sigma = 0.0;
  double cosBar = 0.0;
  double sinBar = 0.0;
  double period = 2.0 * std::numbers::pi;  // M

  std::size_t size() const { return zRe.size(); }
  cplx z(std::size_t j) const { return {zRe[j], zIm[j]}; }
};

inline constexpr double kCosBarFloor = 1e-6;

/// Z(alpha) = M / (2 pi cosBar) [ int_0^alpha exp(i theta) - i alpha sinBar ].
inline CurveSampling renormalizedCurve(std::span<const double> theta, double M, double cosBarFloor = kCosBarFloor) {
  const GridSpec grid(theta.size());
  const std::size_t n = grid.size();
  ComplexGrid e(n);
  for (std::size_t j = 0; j < n; ++j) e[j] = std::polar(1.0, theta[j]);
  const cplx eBar = mean(std::span<const cplx>(e));
  CurveSampling out;
  out.period = M;
  out.cosBar = eBar.real();
  out.sinBar = eBar.imag();
  if (!(std::abs(out.cosBar) > cosBarFloor)) {
    throw Error(ErrorKind::DegenerateCurve, "mean of cos(theta) is " + std::to_string(out.cosBar));
  }
  const double scale = M / (2.0 * std::numbers::pi * out.cosBar);
  out.sigma = scale;

  ComplexGrid fluct(n);
  for (std::size_t j = 0; j < n; ++j) fluct[j] = e[j] - eBar;
  // The fluctuation is mean-zero by construction; skip the precondition scan.
  const ComplexGrid F = antiderivative(std::span<const cplx>(fluct), std::numeric_limits<double>::infinity());
  const cplx F0 = F[n / 2];  // alpha_{n/2} = 0

  out.zRe.resize(n);
  out.zIm.resize(n);
  out.zAlpha.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // alpha*cosBar from the mean of exp(i theta); the alpha*sinBar part cancels.
    const cplx zj = scale * (grid.alpha(j) * out.cosBar + (F[j] - F0));
    out.zRe[j] = zj.real();
    out.zIm[j] = zj.imag();
    out.zAlpha[j] = scale * (e[j] - cplx{0.0, out.sinBar});
  }
  return out;
}

/// Total displacement max(y) - min(y) over the grid nodes.
inline double displacement(const CurveSampling& curve) {
  if (curve.zIm.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(curve.zIm.begin(), curve.zIm.end());
  return *hi - *lo;
}

struct IntersectionReport {
  bool intersects = false;
  double minDistance = std::numeric_limits<double>::infinity();
};

/// Closest approach between nodes whose parameter separation (including one
/// period shift either way) is at least 3 grid spacings; the curve is treated
/// as horizontally periodic.
inline IntersectionReport selfIntersects(const CurveSampling& curve, double tol = 1e-3) {
  const std::size_t n = curve.size();
  const long minSep = 3;
  IntersectionReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int shift = -1; shift <= 1; ++shift) {
        const long sep = static_cast<long>(j) + shift * static_cast<long>(n) - static_cast<long>(i);
        if (std::labs(sep) < minSep) continue;
        const double dx = curve.zRe[j] + shift * curve.period - curve.zRe[i];
        const double dy = curve.zIm[j] - curve.zIm[i];
        rep.minDistance = std::min(rep.minDistance, std::hypot(dx, dy));
      }
    }
  }
  rep.intersects = rep.minDistance <= tol;
  return rep;
}

}  // namespace hydrowave
