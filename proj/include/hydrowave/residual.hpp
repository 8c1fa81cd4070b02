#pragma once

// Traveling-wave residual in coefficient space. Unknowns are the sine
// coefficients of theta, the cosine coefficients of gamma - gammaBar and the
// speed c; equations are the sine projections of the sheet-strength equation
// and of the kinematic (normal velocity) equation, plus one amplitude row.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hydrowave/birkhoff_rott.hpp"
#include "hydrowave/curve.hpp"
#include "hydrowave/domain.hpp"
#include "hydrowave/errors.hpp"
#include "hydrowave/spectral.hpp"

namespace hydrowave {

struct AmplitudeConstraint {
  enum class Kind { Displacement, FourierMode };
  enum class Field { A, B };

  Kind kind = Kind::Displacement;
  double target = 0.0;
  std::size_t modeIndex = 1;
  Field field = Field::A;

  static AmplitudeConstraint displacement(double h) {
    if (!(h >= 0.0)) throw Error(ErrorKind::Precondition, "displacement target must be >= 0");
    return {Kind::Displacement, h, 1, Field::A};
  }
  static AmplitudeConstraint fourierMode(Field field, std::size_t mode, double target) {
    if (mode == 0) throw Error(ErrorKind::Precondition, "Fourier constraint mode must be >= 1");
    return {Kind::FourierMode, target, mode, field};
  }

  /// Current value of the constrained quantity.
  double measure(const SpectralWaveState& s, double h) const {
    if (kind == Kind::Displacement) return h;
    if (modeIndex > s.K()) throw Error(ErrorKind::Precondition, "constraint mode exceeds K");
    return field == Field::A ? s.a[modeIndex - 1] : s.b[modeIndex - 1];
  }

  std::string label() const {
    if (kind == Kind::Displacement) return "h";
    return std::string(field == Field::A ? "a" : "b") + std::to_string(modeIndex);
  }
};

struct ResidualVector {
  std::vector<double> fTheta;  // sheet-strength equation, sine modes 1..K
  std::vector<double> fGamma;  // kinematic equation, sine modes 1..K
  double fAmp = 0.0;

  std::vector<double> flatten() const {
    std::vector<double> out(fTheta);
    out.insert(out.end(), fGamma.begin(), fGamma.end());
    out.push_back(fAmp);
    return out;
  }

  /// Max norm over the 2K wave equations (amplitude row excluded).
  double waveNorm() const {
    double m = 0.0;
    for (double v : fTheta) m = std::max(m, std::abs(v));
    for (double v : fGamma) m = std::max(m, std::abs(v));
    return m;
  }

  double maxNorm() const { return std::max(waveNorm(), std::abs(fAmp)); }
};

/// Xi = (3/2) theta_a^2 theta_aa - tau1 sigma^2 theta_aa + (2 Atilde sigma^3 / S) (cos theta)_a.
inline RealGrid computeXi(std::span<const double> theta, const PhysicalParams& p, double sigma) {
  const RealGrid ta = derivative(theta, 1);
  const RealGrid taa = derivative(theta, 2);
  RealGrid cosTheta(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) cosTheta[j] = std::cos(theta[j]);
  const RealGrid dCos = derivative(std::span<const double>(cosTheta), 1);
  const double massCoeff = 2.0 * p.Atilde * sigma * sigma * sigma / p.S;
  RealGrid xi(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    xi[j] = 1.5 * ta[j] * ta[j] * taa[j] - p.tau1 * sigma * sigma * taa[j] + massCoeff * dCos[j];
  }
  return xi;
}

/// Renormalized Omega given a precomputed curve and tangential W* component.
inline RealGrid computeOmegaTilde(std::span<const double> theta, std::span<const double> gamma, double c,
                                  const PhysicalParams& p, const CurveSampling& curve,
                                  std::span<const double> wTangent) {
  const std::size_t n = theta.size();
  const double pi = std::numbers::pi;
  const double cb = curve.cosBar;
  RealGrid flux(n), gammaSq(n), vwSq(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double vw = c * std::cos(theta[j]) - wTangent[j];
    flux[j] = vw * gamma[j];
    gammaSq[j] = gamma[j] * gamma[j];
    vwSq[j] = vw * vw;
  }
  const RealGrid dFlux = derivative(std::span<const double>(flux), 1);
  const RealGrid dGammaSq = derivative(std::span<const double>(gammaSq), 1);
  const RealGrid dVwSq = derivative(std::span<const double>(vwSq), 1);
  const double cGammaSq = pi * cb / (2.0 * p.M);
  const double cSin = p.M * p.M / (2.0 * pi * pi * cb * cb);
  const double cVw = p.M / (2.0 * pi * cb);
  RealGrid omega(n);
  for (std::size_t j = 0; j < n; ++j) {
    omega[j] = dFlux[j] - p.A * (cGammaSq * dGammaSq[j] + cSin * (std::sin(theta[j]) - curve.sinBar)) -
               p.A * cVw * dVwSq[j];
  }
  return omega;
}

inline RealGrid computeOmegaTilde(std::span<const double> theta, std::span<const double> gamma, double c,
                                  const PhysicalParams& p) {
  const CurveSampling curve = renormalizedCurve(theta, p.M);
  const BirkhoffRottResult br = evaluateWStar(curve, gamma);
  const RealGrid wt = tangentComponent(curve, br.wStar);
  return computeOmegaTilde(theta, gamma, c, p, curve, wt);
}

/// Both residual equations as grid functions, before projection.
struct ResidualFields {
  RealGrid sheet;       // -(S/sigma^3)(theta_aaaa + Xi) + OmegaTilde / sigma
  RealGrid kinematic;   // c sin(theta) + Re(W* N)
  CurveSampling curve;
};

inline ResidualFields residualFields(const SpectralWaveState& state, const PhysicalParams& p, const GridSpec& grid) {
  grid.requireModes(state.K());
  const WaveGridFunctions g = synthesize(state, grid, p.gammaBar);
  const std::size_t n = grid.size();
  ResidualFields out;
  out.curve = renormalizedCurve(g.theta, p.M);
  const BirkhoffRottResult br = evaluateWStar(out.curve, g.gamma);
  const RealGrid wt = tangentComponent(out.curve, br.wStar);
  const RealGrid wn = normalComponent(out.curve, br.wStar);
  const double sigma = out.curve.sigma;

  std::vector<double> k4a(state.K());
  for (std::size_t k = 1; k <= state.K(); ++k) {
    const double kk = static_cast<double>(k);
    k4a[k - 1] = kk * kk * kk * kk * state.a[k - 1];
  }
  const RealGrid theta4 = synthesizeSeries(k4a, {}, 0.0, n);
  const RealGrid xi = computeXi(g.theta, p, sigma);
  const RealGrid omega = computeOmegaTilde(g.theta, g.gamma, state.c, p, out.curve, wt);

  const double bend = p.S / (sigma * sigma * sigma);
  out.sheet.resize(n);
  out.kinematic.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.sheet[j] = -bend * (theta4[j] + xi[j]) + omega[j] / sigma;
    out.kinematic[j] = state.c * std::sin(g.theta[j]) + wn[j];
  }
  return out;
}

inline ResidualVector travelingWaveResidual(const SpectralWaveState& state, const PhysicalParams& p,
                                            const AmplitudeConstraint& constraint, const GridSpec& grid) {
  const ResidualFields f = residualFields(state, p, grid);
  ResidualVector r;
  r.fTheta = sineCoefficients(f.sheet, state.K());
  r.fGamma = sineCoefficients(f.kinematic, state.K());
  r.fAmp = constraint.measure(state, displacement(f.curve)) - constraint.target;
  for (double v : r.flatten()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NumericalBlowup, "non-finite residual");
  }
  return r;
}

}  // namespace hydrowave
