#pragma once

// Periodic Birkhoff-Rott integral W* = (1/2i) H(gamma / z_alpha) + K[z] gamma.
// The smooth remainder K is summed with the alternating trapezoid rule: for
// an output node j only nodes m with m - j odd contribute, each with weight
// 2 * dalpha, so the diagonal is never touched.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "hydrowave/curve.hpp"
#include "hydrowave/errors.hpp"
#include "hydrowave/spectral.hpp"

namespace hydrowave {

/// cot(w) for complex w, stable for large |Im w|.
inline cplx cotComplex(cplx w) {
  const cplx i{0.0, 1.0};
  if (w.imag() >= 0.0) {
    const cplx q = std::exp(2.0 * i * w);  // |q| <= 1
    return i * (q + 1.0) / (q - 1.0);
  }
  const cplx q = std::exp(-2.0 * i * w);  // |q| < 1
  return i * (1.0 + q) / (1.0 - q);
}

struct BirkhoffRottResult {
  ComplexGrid wStar;
  ComplexGrid hilbertPart;
  ComplexGrid remainderPart;
};

inline ComplexGrid remainderIntegral(const CurveSampling& curve, std::span<const double> gamma) {
  const std::size_t n = curve.size();
  const double M = curve.period;
  const double dAlpha = 2.0 * std::numbers::pi / static_cast<double>(n);
  const double scale = M / (2.0 * std::numbers::pi);

  // cot((alpha_j - alpha_m)/2) depends only on (j - m) mod n; only odd offsets are used.
  std::vector<double> cotOffset(n, 0.0);
  for (std::size_t d = 1; d < n; d += 2) cotOffset[d] = 1.0 / std::tan(0.5 * static_cast<double>(d) * dAlpha);
  ComplexGrid weightOverZa(n);
  for (std::size_t m = 0; m < n; ++m) weightOverZa[m] = gamma[m] * scale / curve.zAlpha[m];

  const double factor = M > 0.0 ? std::numbers::pi / M : 0.0;
  const cplx prefactor = 2.0 * dAlpha / cplx{0.0, 2.0 * M};
  ComplexGrid out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx zj = curve.z(j);
    cplx acc{0.0, 0.0};
    for (std::size_t m = (j + 1) % 2; m < n; m += 2) {
      const cplx diff = zj - curve.z(m);
      if (std::abs(diff) == 0.0) {
        throw Error(ErrorKind::SingularCurve, "coincident curve nodes " + std::to_string(j) + " and " + std::to_string(m));
      }
      const std::size_t offset = (j + n - m) % n;
      acc += gamma[m] * cotComplex(factor * diff) - weightOverZa[m] * cotOffset[offset];
    }
    out[j] = prefactor * acc;
  }
  return out;
}

/// W*(alpha_j) on the renormalized curve for sheet strength gamma.
inline BirkhoffRottResult evaluateWStar(const CurveSampling& curve, std::span<const double> gamma) {
  const std::size_t n = curve.size();
  if (gamma.size() != n) throw Error(ErrorKind::Precondition, "gamma and curve sizes differ");
  if (n % 2 != 0) throw Error(ErrorKind::Resolution, "alternating quadrature needs an even grid");
  BirkhoffRottResult res;
  ComplexGrid ratio(n);
  for (std::size_t j = 0; j < n; ++j) ratio[j] = gamma[j] / curve.zAlpha[j];
  const ComplexGrid h = hilbert(std::span<const cplx>(ratio));
  res.hilbertPart.resize(n);
  const cplx half_over_i{0.0, -0.5};
  for (std::size_t j = 0; j < n; ++j) res.hilbertPart[j] = half_over_i * h[j];
  res.remainderPart = remainderIntegral(curve, gamma);
  res.wStar.resize(n);
  for (std::size_t j = 0; j < n; ++j) res.wStar[j] = res.hilbertPart[j] + res.remainderPart[j];
  return res;
}

/// Re(W* N) with N = i z_alpha / |z_alpha|.
inline RealGrid normalComponent(const CurveSampling& curve, std::span<const cplx> wStar) {
  RealGrid out(wStar.size());
  for (std::size_t j = 0; j < wStar.size(); ++j) {
    const cplx N = cplx{0.0, 1.0} * curve.zAlpha[j] / std::abs(curve.zAlpha[j]);
    out[j] = (wStar[j] * N).real();
  }
  return out;
}

/// Re(W* T) with T = z_alpha / |z_alpha|.
inline RealGrid tangentComponent(const CurveSampling& curve, std::span<const cplx> wStar) {
  RealGrid out(wStar.size());
  for (std::size_t j = 0; j < wStar.size(); ++j) {
    const cplx T = curve.zAlpha[j] / std::abs(curve.zAlpha[j]);
    out[j] = (wStar[j] * T).real();
  }
  return out;
}

}  // namespace hydrowave
