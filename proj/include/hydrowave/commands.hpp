#pragma once

// Subcommand bodies shared by the CLI and the tests. Each writes its files
// under cfg.output and returns a process exit code.

#include <filesystem>
#include <iostream>
#include <string>

#include "hydrowave/continuation.hpp"
#include "hydrowave/convergence.hpp"
#include "hydrowave/io.hpp"
#include "hydrowave/wilton.hpp"

namespace hydrowave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

inline int exitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::InvalidParams:
    case ErrorKind::Io:
    case ErrorKind::Resolution:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

namespace cmd_detail {
inline BranchPoint pickPoint(const json& doc, long index) {
  if (doc.contains("points")) {
    const json& pts = doc.at("points");
    const long n = static_cast<long>(pts.size());
    if (n == 0) throw Error(ErrorKind::Usage, "branch file has no points");
    const long i = index < 0 ? n + index : index;
    if (i < 0 || i >= n) throw Error(ErrorKind::Usage, "point index out of range");
    return pointFromJson(pts.at(static_cast<std::size_t>(i)));
  }
  if (doc.contains("point")) return pointFromJson(doc.at("point"));
  throw Error(ErrorKind::Usage, "file holds neither a branch nor a state");
}
}  // namespace cmd_detail

/// Starting state and its constraint for the configured guess.
inline BranchGuess makeGuess(const RunConfig& cfg, const PhysicalParams& p) {
  const std::size_t K = cfg.K;
  switch (cfg.guess) {
    case GuessKind::WiltonPlus:
    case GuessKind::WiltonMinus: {
      const int sign = cfg.guess == GuessKind::WiltonPlus ? 1 : -1;
      const WiltonCoefficients w = wiltonCoefficients(p, sign);
      return {wiltonInitialGuess(cfg.eps, w, K),
              AmplitudeConstraint::fourierMode(AmplitudeConstraint::Field::A, 1, -2.0 * cfg.eps),
              toString(cfg.guess) + " eps=" + fmt17(cfg.eps)};
    }
    case GuessKind::Stokes: {
      const double eps = stokesAmplitudeForDisplacement(cfg.stokesK, cfg.h, p, cfg.stokesBranch);
      return {stokesInitialGuess(cfg.stokesK, eps, p, K, cfg.stokesBranch), AmplitudeConstraint::displacement(cfg.h),
              "stokes k=" + std::to_string(cfg.stokesK) + (cfg.stokesBranch == SpeedBranch::Plus ? " plus" : " minus") +
                  " h=" + fmt17(cfg.h)};
    }
    case GuessKind::Flat: {
      const double c = speedFor(std::max(1L, cfg.stokesK), p, cfg.stokesBranch);
      return {SpectralWaveState(K, c), AmplitudeConstraint::displacement(cfg.h), "flat h=" + fmt17(cfg.h)};
    }
    case GuessKind::File: {
      const BranchPoint pt = cmd_detail::pickPoint(parseJsonFile(cfg.guessFile), cfg.pointIndex);
      BranchPoint resampled = pt;
      resampled.state = resampleModes(pt.state, K);
      return {resampled.state, constraintFor(pt), "file " + cfg.guessFile};
    }
  }
  throw Error(ErrorKind::Usage, "unknown guess kind");
}

inline int cmdAnalyze(const RunConfig& cfg) {
  cfg.validate();
  const std::filesystem::path out = std::filesystem::path(cfg.output) / "modes.csv";
  writeFile(out, modeTableCsv(cfg.params, cfg.Kmax));
  std::cout << "wrote " << out.string() << "\n";
  return kExitOk;
}

inline int cmdSolve(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec grid(cfg.nGrid);
  const BranchGuess guess = makeGuess(cfg, cfg.params);
  PointSolve sol = solveAt(guess.state, cfg.params, grid, guess.constraint, cfg.solver);
  json doc = {{"config", toJson(cfg)}, {"provenance", guess.descriptor}, {"converged", sol.converged}};
  if (sol.converged) {
    sol.point.paramId = guess.constraint.label();
    doc["point"] = toJson(sol.point);
  } else {
    doc["failure"] = sol.failure;
  }
  const std::filesystem::path out = std::filesystem::path(cfg.output) / "state.json";
  writeFile(out, dumpJson(doc));
  std::cout << "wrote " << out.string() << (sol.converged ? "" : " (not converged: " + sol.failure + ")") << "\n";
  return sol.converged ? kExitOk : kExitNumerical;
}

inline int cmdContinue(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec grid(cfg.nGrid);
  const BranchRecord rec = continueBranch(makeGuess(cfg, cfg.params), cfg.params, grid, cfg.continuation);
  const std::filesystem::path dir(cfg.output);
  writeFile(dir / "branch.json", dumpJson(toJson(rec, cfg)));
  writeFile(dir / "branch.csv", branchCsv(rec));
  std::cout << "wrote " << (dir / "branch.json").string() << ": " << rec.points.size()
            << " points, termination=" << toString(rec.termination) << "\n";
  return rec.termination == Termination::SolverFailure ? kExitNumerical : kExitOk;
}

inline int cmdSurface(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec grid(cfg.nGrid);
  const SurfaceRecord surf = buildSurface([&](const PhysicalParams& p) { return makeGuess(cfg, p); }, cfg.params,
                                          cfg.atildeGrid, grid, cfg.continuation, cfg.jobs);
  const std::filesystem::path dir(cfg.output);
  json index = {{"config", toJson(cfg)}, {"branches", json::array()}};
  bool anyEmpty = false;
  for (std::size_t i = 0; i < surf.branches.size(); ++i) {
    const std::string name = "branch_" + std::to_string(i) + ".json";
    writeFile(dir / name, dumpJson(toJson(surf.branches[i], cfg)));
    index["branches"].push_back({{"atilde", surf.atildeGrid[i]},
                                 {"file", name},
                                 {"points", surf.branches[i].points.size()},
                                 {"termination", toString(surf.branches[i].termination)}});
    anyEmpty = anyEmpty || surf.branches[i].points.empty();
  }
  writeFile(dir / "surface.json", dumpJson(index));
  writeFile(dir / "surface.csv", surfaceCsv(surf));
  std::cout << "wrote " << (dir / "surface.json").string() << ": " << surf.branches.size() << " branches\n";
  return anyEmpty ? kExitNumerical : kExitOk;
}

/// Index of the point whose h is closest to `fraction` of the branch maximum.
inline std::size_t moderatePointIndex(const BranchRecord& rec, double fraction = 0.6) {
  double hMax = 0.0;
  for (const BranchPoint& pt : rec.points) hMax = std::max(hMax, pt.h);
  std::size_t best = 0;
  for (std::size_t i = 0; i < rec.points.size(); ++i) {
    if (std::abs(rec.points[i].h - fraction * hMax) < std::abs(rec.points[best].h - fraction * hMax)) best = i;
  }
  return best;
}

inline int cmdConverge(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec coarseGrid(cfg.nGrid), fineGrid(2 * cfg.nGrid);
  const BranchRecord rec = continueBranch(makeGuess(cfg, cfg.params), cfg.params, coarseGrid, cfg.continuation);
  const std::filesystem::path dir(cfg.output);
  writeFile(dir / "branch.json", dumpJson(toJson(rec, cfg)));
  if (rec.points.empty()) {
    std::cout << "branch produced no points: " << rec.detail << "\n";
    return kExitNumerical;
  }
  const ConvergenceStudy st = refineBranch(rec, fineGrid, cfg.continuation.solver);
  writeFile(dir / "convergence_speeds.csv", convergenceSpeedsCsv(st));
  json doc = {{"config", toJson(cfg)}, {"n_coarse", st.nCoarse}, {"n_fine", st.nFine}, {"points", json::array()}};
  for (const ConvergencePoint& p : st.points) {
    doc["points"].push_back({{"index", p.index},
                             {"h", p.h},
                             {"c_coarse", p.cCoarse},
                             {"c_fine", p.fineConverged ? json(p.cFine) : json(nullptr)},
                             {"fine_converged", p.fineConverged}});
  }
  const std::size_t last = st.points.size() - 1, mid = moderatePointIndex(rec);
  for (auto [label, i] : {std::pair<std::string, std::size_t>{"final", last}, {"moderate", mid}}) {
    if (!st.points[i].fineConverged) continue;
    writeFile(dir / ("convergence_spectrum_" + label + ".csv"), spectrumCsv(rec.points[i].state, st.points[i].fine));
    doc[label] = {{"index", i},
                  {"tail_coarse", fourierTail(rec.points[i].state)},
                  {"tail_fine", fourierTail(st.points[i].fine)},
                  {"c_diff", st.points[i].cFine - st.points[i].cCoarse}};
  }
  writeFile(dir / "convergence.json", dumpJson(doc));
  std::cout << "wrote " << (dir / "convergence.json").string() << ": " << st.points.size() << " points\n";
  bool allFine = true;
  for (const ConvergencePoint& p : st.points) allFine = allFine && p.fineConverged;
  return allFine ? kExitOk : kExitNumerical;
}

/// Curve samples of one stored state (branch or state file given by guessFile).
inline int cmdProfile(const RunConfig& cfg) {
  if (cfg.guessFile.empty()) throw Error(ErrorKind::Usage, "profile needs guessFile");
  const json doc = parseJsonFile(cfg.guessFile);
  const BranchPoint pt = cmd_detail::pickPoint(doc, cfg.pointIndex);
  const PhysicalParams p = doc.contains("config") ? paramsFromJson(doc.at("config").at("params")) : cfg.params;
  const std::size_t n = doc.contains("config") ? doc.at("config").at("nGrid").get<std::size_t>() : cfg.nGrid;
  const GridSpec grid(n);
  const std::filesystem::path dir(cfg.output);
  writeFile(dir / "profile.csv", profileCsv(pt.state, p, grid));
  writeFile(dir / "curve.json", dumpJson(curveFixture(pt.state, p, grid)));
  std::cout << "wrote " << (dir / "profile.csv").string() << "\n";
  return kExitOk;
}

}  // namespace hydrowave
