#pragma once

// Two-resolution comparison: every point of a coarse branch is re-solved on
// a doubled grid under the same constraint, warm-started from the coarse
// coefficients padded with zeros.

#include <cmath>
#include <vector>

#include "hydrowave/continuation.hpp"

namespace hydrowave {

inline SpectralWaveState resampleModes(const SpectralWaveState& s, std::size_t K) {
  SpectralWaveState out(K, s.c);
  for (std::size_t k = 0; k < std::min(K, s.K()); ++k) {
    out.a[k] = s.a[k];
    out.b[k] = s.b[k];
  }
  return out;
}

/// |(a_k, b_k)| for k = 1..K.
inline std::vector<double> modeMagnitudes(const SpectralWaveState& s) {
  std::vector<double> m(s.K());
  for (std::size_t k = 0; k < s.K(); ++k) m[k] = std::hypot(s.a[k], s.b[k]);
  return m;
}

/// Largest mode magnitude among the top quarter of wavenumbers.
inline double fourierTail(const SpectralWaveState& s) {
  const std::vector<double> m = modeMagnitudes(s);
  double tail = 0.0;
  for (std::size_t k = m.size() - m.size() / 4; k < m.size(); ++k) tail = std::max(tail, m[k]);
  return tail;
}

inline AmplitudeConstraint constraintFor(const BranchPoint& pt) {
  if (pt.paramId == "h") return AmplitudeConstraint::displacement(pt.h);
  const auto field = pt.paramId[0] == 'a' ? AmplitudeConstraint::Field::A : AmplitudeConstraint::Field::B;
  const std::size_t mode = std::stoul(pt.paramId.substr(1));
  const double target = field == AmplitudeConstraint::Field::A ? pt.state.a[mode - 1] : pt.state.b[mode - 1];
  return AmplitudeConstraint::fourierMode(field, mode, target);
}

struct ConvergencePoint {
  std::size_t index = 0;
  double h = 0.0;
  double cCoarse = 0.0;
  double cFine = 0.0;
  bool fineConverged = false;
  SpectralWaveState fine;
};

struct ConvergenceStudy {
  std::size_t nCoarse = 0;
  std::size_t nFine = 0;
  std::vector<ConvergencePoint> points;
};

inline ConvergenceStudy refineBranch(const BranchRecord& coarse, const GridSpec& fineGrid, const BroydenOptions& opt) {
  ConvergenceStudy study;
  study.nCoarse = coarse.nGrid;
  study.nFine = fineGrid.size();
  const std::size_t K = fineGrid.dealiasedModes();
  for (std::size_t i = 0; i < coarse.points.size(); ++i) {
    const BranchPoint& pt = coarse.points[i];
    ConvergencePoint cp;
    cp.index = i;
    cp.h = pt.h;
    cp.cCoarse = pt.state.c;
    SpectralWaveState guess = resampleModes(pt.state, K);
    PointSolve sol = solveAt(guess, coarse.params, fineGrid, constraintFor(pt), opt);
    cp.fineConverged = sol.converged;
    if (sol.converged) {
      cp.cFine = sol.point.state.c;
      cp.fine = sol.point.state;
    }
    study.points.push_back(std::move(cp));
  }
  return study;
}

}  // namespace hydrowave
