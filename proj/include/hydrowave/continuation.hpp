#pragma once

// Natural-parameter continuation with automatic parameter switching. The
// active parameter starts as the displacement h; when a step cannot be
// completed it moves to the next Fourier coefficient (a_m, then b_m) that is
// present in the solution, stepping in the direction that coefficient was
// drifting. The b_m are needed to pass static waves, where every a_m turns.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "hydrowave/broyden.hpp"
#include "hydrowave/curve.hpp"
#include "hydrowave/domain.hpp"
#include "hydrowave/errors.hpp"
#include "hydrowave/residual.hpp"

namespace hydrowave {

enum class Termination { SelfIntersection, StaticWave, MaxPoints, SolverFailure };

inline std::string toString(Termination t) {
  switch (t) {
    case Termination::SelfIntersection: return "selfIntersection";
    case Termination::StaticWave: return "staticWave";
    case Termination::MaxPoints: return "maxPoints";
    case Termination::SolverFailure: return "solverFailure";
  }
  return "solverFailure";
}

inline Termination terminationFromString(const std::string& s) {
  if (s == "selfIntersection") return Termination::SelfIntersection;
  if (s == "staticWave") return Termination::StaticWave;
  if (s == "maxPoints") return Termination::MaxPoints;
  if (s == "solverFailure") return Termination::SolverFailure;
  throw Error(ErrorKind::Io, "unknown termination '" + s + "'");
}

struct ContinuationPolicy {
  double initialStep = 0.01;  // in h
  double stepMin = 1e-6;
  double stepMax = 0.1;
  double growth = 1.3;
  double shrink = 0.5;
  int easyIterations = 10;
  int easyStreak = 2;
  int failuresBeforeSwitch = 3;
  std::size_t maxPoints = 400;
  std::size_t maxSwitches = 40;
  double cTolFactor = 1e-3;    // static wave when |c| <= cTolFactor * |c of first point|
  double intersectionTol = 1e-3;
  double harmonicFloor = 1e-10;  // harmonics below this magnitude are not eligible parameters
  BroydenOptions solver{1e-8, 60, 1e-7, true, 8, 10.0};
};

struct BranchPoint {
  SpectralWaveState state;
  double h = 0.0;
  std::string paramId = "h";
  double step = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct SwitchEvent {
  std::size_t afterPoint = 0;
  std::string from;
  std::string to;
  std::string reason;
};

struct BranchGuess {
  SpectralWaveState state;
  AmplitudeConstraint constraint;
  std::string descriptor;
};

struct BranchRecord {
  std::vector<BranchPoint> points;
  PhysicalParams params;
  std::size_t nGrid = 0;
  Termination termination = Termination::SolverFailure;
  std::string provenance;
  std::string detail;
  std::vector<SwitchEvent> switches;
};

struct SurfaceRecord {
  std::vector<double> atildeGrid;
  std::vector<BranchRecord> branches;
};

/// Continuation parameter: slot 0 is h, slot 2m-1 is a_m and slot 2m is b_m.
struct ActiveParameter {
  std::size_t slot = 0;
  double direction = 1.0;

  std::size_t mode() const { return (slot + 1) / 2; }
  bool isA() const { return slot % 2 == 1; }
  std::string label() const {
    if (slot == 0) return "h";
    return (isA() ? "a" : "b") + std::to_string(mode());
  }
  double value(const SpectralWaveState& s, double h) const {
    if (slot == 0) return h;
    return isA() ? s.a[mode() - 1] : s.b[mode() - 1];
  }
  AmplitudeConstraint constraint(double target) const {
    if (slot == 0) return AmplitudeConstraint::displacement(std::max(target, 0.0));
    return AmplitudeConstraint::fourierMode(isA() ? AmplitudeConstraint::Field::A : AmplitudeConstraint::Field::B,
                                            mode(), target);
  }
};

struct PointSolve {
  bool converged = false;
  BranchPoint point;
  CurveSampling curve;
  std::string failure;
};

/// One Broyden solve at a fixed constraint; numerical errors become a failure report.
inline PointSolve solveAt(const SpectralWaveState& guess, const PhysicalParams& p, const GridSpec& grid,
                          const AmplitudeConstraint& constraint, const BroydenOptions& opt) {
  PointSolve out;
  auto fn = [&](std::span<const double> x) {
    return travelingWaveResidual(SpectralWaveState::unpack(x), p, constraint, grid).flatten();
  };
  try {
    const std::vector<double> x0 = guess.pack();
    const SolveReport rep = broydenSolve(fn, x0, opt);
    if (!rep.converged) {
      out.failure = "no convergence after " + std::to_string(rep.iterations) + " iterations";
      return out;
    }
    out.point.state = SpectralWaveState::unpack(rep.x);
    const WaveGridFunctions g = synthesize(out.point.state, grid, p.gammaBar);
    out.curve = renormalizedCurve(g.theta, p.M);
    out.point.h = displacement(out.curve);
    out.point.residual = rep.residualNorm;
    out.point.iterations = rep.iterations;
    out.converged = true;
  } catch (const Error& e) {
    out.failure = e.what();
  }
  return out;
}

inline BranchRecord continueBranch(const BranchGuess& guess, const PhysicalParams& p, const GridSpec& grid,
                                   const ContinuationPolicy& policy,
                                   const std::function<void(const BranchPoint&)>& onPoint = {}) {
  p.validate();
  grid.requireModes(guess.state.K());
  BranchRecord rec;
  rec.params = p;
  rec.nGrid = grid.size();
  rec.provenance = guess.descriptor;

  PointSolve first = solveAt(guess.state, p, grid, guess.constraint, policy.solver);
  if (!first.converged) {
    rec.termination = Termination::SolverFailure;
    rec.detail = "initial guess failed: " + first.failure;
    return rec;
  }
  first.point.paramId = guess.constraint.label();
  rec.points.push_back(first.point);
  if (onPoint) onPoint(first.point);
  if (policy.maxPoints <= 1) {
    rec.termination = Termination::MaxPoints;
    return rec;
  }
  const double cTol = policy.cTolFactor * std::abs(first.point.state.c);
  if (selfIntersects(first.curve, policy.intersectionTol).intersects) {
    rec.termination = Termination::SelfIntersection;
    return rec;
  }

  ActiveParameter active;
  double step = policy.initialStep;
  int easy = 0;
  int failures = 0;
  // Index of the first point stored under the active parameter; the secant
  // predictor only uses pairs measured in the same parameter.
  std::size_t activeSince = 0;
  std::vector<std::size_t> triedHere{0};

  auto switchParameter = [&](const std::string& reason) -> bool {
    if (rec.switches.size() >= policy.maxSwitches) return false;
    const BranchPoint& last = rec.points.back();
    const std::size_t K = last.state.K();
    const BranchPoint* prev = rec.points.size() >= 2 ? &rec.points[rec.points.size() - 2] : nullptr;
    // Candidates in ascending wavenumber after the current one, wrapping through h.
    // Each candidate is tried at most once per stored point.
    const std::size_t slots = 2 * K + 1;
    for (std::size_t offset = 1; offset < slots; ++offset) {
      ActiveParameter next;
      next.slot = (active.slot + offset) % slots;
      if (std::find(triedHere.begin(), triedHere.end(), next.slot) != triedHere.end()) continue;
      const double now = next.value(last.state, last.h);
      if (next.slot != 0 && std::abs(now) < policy.harmonicFloor) continue;
      double drift = prev ? now - next.value(prev->state, prev->h) : now;
      if (drift == 0.0) continue;
      next.direction = drift > 0.0 ? 1.0 : -1.0;
      rec.switches.push_back({rec.points.size() - 1, active.label(), next.label(), reason});
      triedHere.push_back(next.slot);
      active = next;
      step = std::clamp(std::abs(drift), policy.stepMin * 10.0, policy.stepMax);
      if (!prev) step = std::max(policy.stepMin * 10.0, policy.initialStep * std::abs(now));
      failures = 0;
      easy = 0;
      activeSince = rec.points.size() - 1;
      return true;
    }
    return false;
  };

  while (rec.points.size() < policy.maxPoints) {
    const BranchPoint& last = rec.points.back();
    const double current = active.value(last.state, last.h);
    const double target = current + active.direction * step;

    // Secant predictor along the stored branch, scaled to this parameter step.
    SpectralWaveState predicted = last.state;
    if (rec.points.size() >= 2) {
      const BranchPoint& prev = rec.points[rec.points.size() - 2];
      const double dPrev = current - active.value(prev.state, prev.h);
      if (std::abs(dPrev) > 0.0 && rec.points.size() - 1 > activeSince) {
        const double ratio = (target - current) / dPrev;
        const std::vector<double> xl = last.state.pack(), xp = prev.state.pack();
        std::vector<double> xs(xl.size());
        for (std::size_t i = 0; i < xl.size(); ++i) xs[i] = xl[i] + ratio * (xl[i] - xp[i]);
        predicted = SpectralWaveState::unpack(xs);
      }
    }

    PointSolve sol = solveAt(predicted, p, grid, active.constraint(target), policy.solver);
    // Reject solutions that fail to advance or jump back across the last point.
    if (sol.converged) {
      const double got = active.value(sol.point.state, sol.point.h);
      if (active.direction * (got - current) <= 0.0) {
        sol.converged = false;
        sol.failure = "no advance in " + active.label();
      }
    }
    if (!sol.converged) {
      ++failures;
      easy = 0;
      step *= policy.shrink;
      if (failures >= policy.failuresBeforeSwitch || step < policy.stepMin) {
        const std::string why = step < policy.stepMin ? "step underflow" : "repeated solver failure";
        if (!switchParameter(why + " (" + sol.failure + ")")) {
          rec.termination = Termination::SolverFailure;
          rec.detail = "no continuation parameter left after " + why + ": " + sol.failure;
          return rec;
        }
      }
      continue;
    }

    failures = 0;
    triedHere.assign(1, active.slot);
    sol.point.paramId = active.label();
    sol.point.step = step;
    const double cPrev = last.state.c;
    const BranchPoint lastCopy = last;
    rec.points.push_back(sol.point);
    if (onPoint) onPoint(sol.point);

    if (selfIntersects(sol.curve, policy.intersectionTol).intersects) {
      rec.termination = Termination::SelfIntersection;
      return rec;
    }
    const double cNow = sol.point.state.c;
    if (std::abs(cNow) <= cTol) {
      rec.termination = Termination::StaticWave;
      return rec;
    }
    if (cNow * cPrev < 0.0 && rec.points.size() < policy.maxPoints) {
      // One secant pass toward c = 0 between the last two points.
      const double v0 = active.value(lastCopy.state, lastCopy.h);
      const double v1 = active.value(sol.point.state, sol.point.h);
      const double vz = v0 + (v1 - v0) * cPrev / (cPrev - cNow);
      const double frac = (vz - v0) / (v1 - v0);
      const std::vector<double> x0 = lastCopy.state.pack(), x1 = sol.point.state.pack();
      std::vector<double> xs(x0.size());
      for (std::size_t i = 0; i < x0.size(); ++i) xs[i] = x0[i] + frac * (x1[i] - x0[i]);
      PointSolve refined = solveAt(SpectralWaveState::unpack(xs), p, grid, active.constraint(vz), policy.solver);
      if (refined.converged) {
        refined.point.paramId = active.label();
        refined.point.step = std::abs(vz - v0);
        rec.points.push_back(refined.point);
        if (onPoint) onPoint(refined.point);
      }
      rec.termination = Termination::StaticWave;
      rec.detail = "speed changed sign";
      return rec;
    }

    if (sol.point.iterations < policy.easyIterations) {
      if (++easy >= policy.easyStreak) {
        step = std::min(step * policy.growth, policy.stepMax);
        easy = 0;
      }
    } else {
      easy = 0;
    }
  }
  rec.termination = Termination::MaxPoints;
  return rec;
}

/// One branch per Atilde value; branches run on up to `jobs` threads.
inline SurfaceRecord buildSurface(const std::function<BranchGuess(const PhysicalParams&)>& guessFamily,
                                  const PhysicalParams& base, const std::vector<double>& atildeGrid,
                                  const GridSpec& grid, const ContinuationPolicy& policy, unsigned jobs = 1) {
  SurfaceRecord surf;
  surf.atildeGrid = atildeGrid;
  surf.branches.resize(atildeGrid.size());
  std::atomic<std::size_t> nextIndex{0};
  auto worker = [&]() {
    for (std::size_t i = nextIndex++; i < atildeGrid.size(); i = nextIndex++) {
      PhysicalParams p = base;
      p.Atilde = atildeGrid[i];
      BranchRecord& rec = surf.branches[i];
      try {
        rec = continueBranch(guessFamily(p), p, grid, policy);
      } catch (const Error& e) {
        rec = BranchRecord{};
        rec.params = p;
        rec.nGrid = grid.size();
        rec.termination = Termination::SolverFailure;
        rec.detail = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(atildeGrid.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return surf;
}

}  // namespace hydrowave
