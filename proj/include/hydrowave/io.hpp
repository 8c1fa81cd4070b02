#pragma once

// Run configuration (flat key=value text with overrides) and the on-disk
// formats: JSON for states and branches, CSV for tables.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydrowave/continuation.hpp"
#include "hydrowave/convergence.hpp"
#include "hydrowave/curve.hpp"
#include "hydrowave/domain.hpp"
#include "hydrowave/errors.hpp"
#include "hydrowave/linear_analysis.hpp"

namespace hydrowave {

using json = nlohmann::json;

enum class GuessKind { WiltonPlus, WiltonMinus, Stokes, Flat, File };

inline std::string toString(GuessKind g) {
  switch (g) {
    case GuessKind::WiltonPlus: return "wilton+";
    case GuessKind::WiltonMinus: return "wilton-";
    case GuessKind::Stokes: return "stokes";
    case GuessKind::Flat: return "flat";
    case GuessKind::File: return "file";
  }
  return "flat";
}

struct RunConfig {
  PhysicalParams params;
  std::size_t nGrid = 128;
  std::size_t K = 31;
  BroydenOptions solver;
  ContinuationPolicy continuation;

  GuessKind guess = GuessKind::WiltonPlus;
  double eps = 0.01;          // Wilton amplitude
  long stokesK = 1;
  SpeedBranch stokesBranch = SpeedBranch::Plus;
  double h = 0.02;            // displacement target for Stokes and flat guesses
  std::string guessFile;      // state or branch JSON for GuessKind::File
  long pointIndex = -1;       // branch point used from guessFile; negative counts from the end

  long Kmax = 20;             // rows of the mode table
  std::vector<double> atildeGrid;
  unsigned jobs = 1;
  std::string output = "out";

  void validate() const {
    params.validate();
    if (nGrid < 4 || nGrid % 2 != 0) throw Error(ErrorKind::Usage, "nGrid must be even and >= 4");
    if (K < 1 || K > nGrid / 2 - 1) throw Error(ErrorKind::Usage, "K must satisfy 1 <= K <= nGrid/2 - 1");
    if (!(solver.tol > 0.0) || !(solver.fdStep > 0.0)) throw Error(ErrorKind::Usage, "tolerances must be positive");
    if (solver.maxIter < 1) throw Error(ErrorKind::Usage, "maxIter must be >= 1");
    const ContinuationPolicy& c = continuation;
    if (!(c.initialStep > 0.0) || !(c.stepMin > 0.0) || !(c.stepMax > 0.0) || !(c.cTolFactor > 0.0) ||
        !(c.intersectionTol > 0.0)) {
      throw Error(ErrorKind::Usage, "continuation steps and tolerances must be positive");
    }
    if (Kmax < 0) throw Error(ErrorKind::Usage, "Kmax must be >= 0");
    if (guess == GuessKind::Stokes && (stokesK < 1 || static_cast<std::size_t>(stokesK) > K)) {
      throw Error(ErrorKind::Usage, "stokesK must lie in 1..K");
    }
    if (guess == GuessKind::File && guessFile.empty()) throw Error(ErrorKind::Usage, "guess=file needs guessFile");
    if (jobs < 1) throw Error(ErrorKind::Usage, "jobs must be >= 1");
  }
};

namespace io_detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parseDouble(const std::string& key, const std::string& v) {
  // Accept simple fractions such as 1/9.
  const auto slash = v.find('/');
  try {
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(v.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(v);
      const std::string rest = v.substr(slash + 1);
      const double den = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(v);
      return num / den;
    }
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Usage, "key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline long parseInt(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Usage, "key '" + key + "' expects an integer, got '" + v + "'");
  }
}

inline std::size_t parseCount(const std::string& key, const std::string& v) {
  const long x = parseInt(key, v);
  if (x < 0) throw Error(ErrorKind::Usage, "key '" + key + "' must be >= 0");
  return static_cast<std::size_t>(x);
}

inline bool parseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw Error(ErrorKind::Usage, "key '" + key + "' expects a boolean, got '" + v + "'");
}
}  // namespace io_detail

/// Applies one key=value assignment. Setting nGrid also resets K to its dealiased default.
inline void applySetting(RunConfig& cfg, const std::string& key, const std::string& value) {
  using namespace io_detail;
  const std::string& v = value;
  if (key == "S") cfg.params.S = parseDouble(key, v);
  else if (key == "A") cfg.params.A = parseDouble(key, v);
  else if (key == "Atilde") cfg.params.Atilde = parseDouble(key, v);
  else if (key == "tau1") cfg.params.tau1 = parseDouble(key, v);
  else if (key == "gammaBar") cfg.params.gammaBar = parseDouble(key, v);
  else if (key == "M") cfg.params.M = v == "2pi" ? 2.0 * std::numbers::pi : parseDouble(key, v);
  else if (key == "nGrid") {
    cfg.nGrid = parseCount(key, v);
    cfg.K = cfg.nGrid >= 8 ? cfg.nGrid / 4 - 1 : 1;
  } else if (key == "K") cfg.K = parseCount(key, v);
  else if (key == "tol") cfg.solver.tol = cfg.continuation.solver.tol = parseDouble(key, v);
  else if (key == "maxIter") cfg.solver.maxIter = cfg.continuation.solver.maxIter = static_cast<int>(parseInt(key, v));
  else if (key == "fdStep") cfg.solver.fdStep = cfg.continuation.solver.fdStep = parseDouble(key, v);
  else if (key == "backtracking") cfg.solver.backtracking = cfg.continuation.solver.backtracking = parseBool(key, v);
  else if (key == "step") cfg.continuation.initialStep = parseDouble(key, v);
  else if (key == "stepMin") cfg.continuation.stepMin = parseDouble(key, v);
  else if (key == "stepMax") cfg.continuation.stepMax = parseDouble(key, v);
  else if (key == "maxPoints") cfg.continuation.maxPoints = parseCount(key, v);
  else if (key == "maxSwitches") cfg.continuation.maxSwitches = parseCount(key, v);
  else if (key == "cTolFactor") cfg.continuation.cTolFactor = parseDouble(key, v);
  else if (key == "iTol") cfg.continuation.intersectionTol = parseDouble(key, v);
  else if (key == "guess") {
    if (v == "wilton+") cfg.guess = GuessKind::WiltonPlus;
    else if (v == "wilton-") cfg.guess = GuessKind::WiltonMinus;
    else if (v == "stokes") cfg.guess = GuessKind::Stokes;
    else if (v == "flat") cfg.guess = GuessKind::Flat;
    else if (v == "file") cfg.guess = GuessKind::File;
    else throw Error(ErrorKind::Usage, "guess must be one of wilton+, wilton-, stokes, flat, file");
  } else if (key == "eps") cfg.eps = parseDouble(key, v);
  else if (key == "stokesK") cfg.stokesK = parseInt(key, v);
  else if (key == "stokesBranch") {
    if (v == "plus") cfg.stokesBranch = SpeedBranch::Plus;
    else if (v == "minus") cfg.stokesBranch = SpeedBranch::Minus;
    else throw Error(ErrorKind::Usage, "stokesBranch must be plus or minus");
  } else if (key == "h") cfg.h = parseDouble(key, v);
  else if (key == "guessFile") cfg.guessFile = v;
  else if (key == "point") cfg.pointIndex = parseInt(key, v);
  else if (key == "Kmax") cfg.Kmax = parseInt(key, v);
  else if (key == "atilde") {
    cfg.atildeGrid.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) cfg.atildeGrid.push_back(parseDouble(key, item));
    }
  } else if (key == "jobs") cfg.jobs = static_cast<unsigned>(parseCount(key, v));
  else if (key == "output") cfg.output = v;
  else throw Error(ErrorKind::Usage, "unknown config key '" + key + "'");
}

inline void applyAssignment(RunConfig& cfg, const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::Usage, "expected key=value, got '" + line + "'");
  applySetting(cfg, io_detail::trim(line.substr(0, eq)), io_detail::trim(line.substr(eq + 1)));
}

/// Parses key=value lines; '#' starts a comment.
inline RunConfig parseConfig(const std::string& text, RunConfig cfg = {}) {
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = io_detail::trim(line);
    if (!line.empty()) applyAssignment(cfg, line);
  }
  return cfg;
}

inline std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void writeFile(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

/// 17 significant digits, enough for an exact double round trip.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// --- JSON ---------------------------------------------------------------

inline json toJson(const PhysicalParams& p) {
  return {{"S", p.S}, {"A", p.A}, {"Atilde", p.Atilde}, {"tau1", p.tau1}, {"gammaBar", p.gammaBar}, {"M", p.M}};
}

inline PhysicalParams paramsFromJson(const json& j) {
  PhysicalParams p;
  p.S = j.at("S").get<double>();
  p.A = j.at("A").get<double>();
  p.Atilde = j.at("Atilde").get<double>();
  p.tau1 = j.at("tau1").get<double>();
  p.gammaBar = j.at("gammaBar").get<double>();
  p.M = j.at("M").get<double>();
  return p;
}

inline json toJson(const RunConfig& c) {
  return {{"params", toJson(c.params)},
          {"nGrid", c.nGrid},
          {"K", c.K},
          {"tol", c.solver.tol},
          {"maxIter", c.solver.maxIter},
          {"fdStep", c.solver.fdStep},
          {"backtracking", c.solver.backtracking},
          {"step", c.continuation.initialStep},
          {"stepMin", c.continuation.stepMin},
          {"stepMax", c.continuation.stepMax},
          {"maxPoints", c.continuation.maxPoints},
          {"maxSwitches", c.continuation.maxSwitches},
          {"cTolFactor", c.continuation.cTolFactor},
          {"iTol", c.continuation.intersectionTol},
          {"guess", toString(c.guess)},
          {"eps", c.eps},
          {"stokesK", c.stokesK},
          {"stokesBranch", c.stokesBranch == SpeedBranch::Plus ? "plus" : "minus"},
          {"h", c.h},
          {"guessFile", c.guessFile},
          {"point", c.pointIndex},
          {"Kmax", c.Kmax},
          {"atilde", c.atildeGrid},
          {"jobs", c.jobs},
          {"output", c.output}};
}

inline RunConfig configFromJson(const json& j) {
  RunConfig c;
  c.params = paramsFromJson(j.at("params"));
  c.nGrid = j.at("nGrid").get<std::size_t>();
  c.K = j.at("K").get<std::size_t>();
  c.solver.tol = j.at("tol").get<double>();
  c.solver.maxIter = j.at("maxIter").get<int>();
  c.solver.fdStep = j.at("fdStep").get<double>();
  c.solver.backtracking = j.at("backtracking").get<bool>();
  c.continuation.solver = c.solver;
  c.continuation.initialStep = j.at("step").get<double>();
  c.continuation.stepMin = j.at("stepMin").get<double>();
  c.continuation.stepMax = j.at("stepMax").get<double>();
  c.continuation.maxPoints = j.at("maxPoints").get<std::size_t>();
  c.continuation.maxSwitches = j.at("maxSwitches").get<std::size_t>();
  c.continuation.cTolFactor = j.at("cTolFactor").get<double>();
  c.continuation.intersectionTol = j.at("iTol").get<double>();
  applySetting(c, "guess", j.at("guess").get<std::string>());
  c.eps = j.at("eps").get<double>();
  c.stokesK = j.at("stokesK").get<long>();
  applySetting(c, "stokesBranch", j.at("stokesBranch").get<std::string>());
  c.h = j.at("h").get<double>();
  c.guessFile = j.at("guessFile").get<std::string>();
  c.pointIndex = j.value("point", -1L);
  c.Kmax = j.at("Kmax").get<long>();
  c.atildeGrid = j.at("atilde").get<std::vector<double>>();
  c.jobs = j.at("jobs").get<unsigned>();
  c.output = j.at("output").get<std::string>();
  return c;
}

inline json toJson(const BranchPoint& pt) {
  return {{"a", pt.state.a}, {"b", pt.state.b}, {"c", pt.state.c},          {"h", pt.h},
          {"param_id", pt.paramId}, {"step", pt.step}, {"residual", pt.residual}, {"iterations", pt.iterations}};
}

inline BranchPoint pointFromJson(const json& j) {
  BranchPoint pt;
  pt.state.a = j.at("a").get<std::vector<double>>();
  pt.state.b = j.at("b").get<std::vector<double>>();
  if (pt.state.a.size() != pt.state.b.size()) throw Error(ErrorKind::Io, "a and b lengths differ");
  pt.state.c = j.at("c").get<double>();
  pt.h = j.at("h").get<double>();
  pt.paramId = j.at("param_id").get<std::string>();
  pt.step = j.at("step").get<double>();
  pt.residual = j.value("residual", 0.0);
  pt.iterations = j.value("iterations", 0);
  return pt;
}

inline json toJson(const BranchRecord& rec, const RunConfig& cfg) {
  json pts = json::array();
  for (const BranchPoint& pt : rec.points) pts.push_back(toJson(pt));
  json sw = json::array();
  for (const SwitchEvent& s : rec.switches) {
    sw.push_back({{"after_point", s.afterPoint}, {"from", s.from}, {"to", s.to}, {"reason", s.reason}});
  }
  RunConfig embedded = cfg;
  embedded.params = rec.params;
  embedded.nGrid = rec.nGrid;
  return {{"config", toJson(embedded)},
          {"provenance", rec.provenance},
          {"points", pts},
          {"termination", toString(rec.termination)},
          {"detail", rec.detail},
          {"switches", sw}};
}

struct LoadedBranch {
  RunConfig config;
  BranchRecord record;
};

inline LoadedBranch branchFromJson(const json& j) {
  LoadedBranch out;
  out.config = configFromJson(j.at("config"));
  out.record.params = out.config.params;
  out.record.nGrid = out.config.nGrid;
  out.record.provenance = j.value("provenance", "");
  out.record.detail = j.value("detail", "");
  out.record.termination = terminationFromString(j.at("termination").get<std::string>());
  for (const json& p : j.at("points")) out.record.points.push_back(pointFromJson(p));
  for (const json& s : j.value("switches", json::array())) {
    out.record.switches.push_back({s.at("after_point").get<std::size_t>(), s.at("from").get<std::string>(),
                                   s.at("to").get<std::string>(), s.at("reason").get<std::string>()});
  }
  return out;
}

/// Doubles are printed as the shortest decimal that round-trips exactly.
inline std::string dumpJson(const json& j) { return j.dump(2) + "\n"; }

inline json parseJsonFile(const std::filesystem::path& path) {
  try {
    return json::parse(readFile(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

// --- CSV ----------------------------------------------------------------

inline std::string modeTableCsv(const PhysicalParams& p, long Kmax) {
  std::string out = "k,lambda_at_cplus,c_plus,c_minus,R,kernel_dim,partner\n";
  for (long k = 1; k <= Kmax; ++k) {
    const double R = Rpoly(k, p);
    if (R < 0.0) {
      out += std::to_string(k) + ",,,," + fmt17(R) + ",0,\n";
      continue;
    }
    const ModeAnalysis m = kernelClassify(k, p);
    out += std::to_string(k) + "," + fmt17(m.lambda) + "," + fmt17(m.cPlus) + "," + fmt17(m.cMinus) + "," +
           fmt17(m.Rval) + "," + std::to_string(m.kernelDim) + "," + (m.partner ? std::to_string(*m.partner) : "") +
           "\n";
  }
  return out;
}

inline std::string branchCsv(const BranchRecord& rec) {
  std::string out = "index,h,c,param_id,step,residual,iterations\n";
  for (std::size_t i = 0; i < rec.points.size(); ++i) {
    const BranchPoint& pt = rec.points[i];
    out += std::to_string(i) + "," + fmt17(pt.h) + "," + fmt17(pt.state.c) + "," + pt.paramId + "," + fmt17(pt.step) +
           "," + fmt17(pt.residual) + "," + std::to_string(pt.iterations) + "\n";
  }
  return out;
}

inline std::string surfaceCsv(const SurfaceRecord& s) {
  std::string out = "atilde,index,h,c,termination\n";
  for (std::size_t b = 0; b < s.branches.size(); ++b) {
    const BranchRecord& rec = s.branches[b];
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
      out += fmt17(s.atildeGrid[b]) + "," + std::to_string(i) + "," + fmt17(rec.points[i].h) + "," +
             fmt17(rec.points[i].state.c) + "," + toString(rec.termination) + "\n";
    }
  }
  return out;
}

inline std::string convergenceSpeedsCsv(const ConvergenceStudy& st) {
  std::string out = "index,h,c_coarse,c_fine,c_diff,fine_converged\n";
  for (const ConvergencePoint& p : st.points) {
    out += std::to_string(p.index) + "," + fmt17(p.h) + "," + fmt17(p.cCoarse) + "," +
           (p.fineConverged ? fmt17(p.cFine) : "") + "," + (p.fineConverged ? fmt17(p.cFine - p.cCoarse) : "") + "," +
           (p.fineConverged ? "1" : "0") + "\n";
  }
  return out;
}

/// k, |mode| at the coarse and fine resolution (blank beyond the coarse K).
inline std::string spectrumCsv(const SpectralWaveState& coarse, const SpectralWaveState& fine) {
  const std::vector<double> mc = modeMagnitudes(coarse), mf = modeMagnitudes(fine);
  std::string out = "k,coarse,fine\n";
  for (std::size_t k = 0; k < std::max(mc.size(), mf.size()); ++k) {
    out += std::to_string(k + 1) + "," + (k < mc.size() ? fmt17(mc[k]) : "") + "," + (k < mf.size() ? fmt17(mf[k]) : "") +
           "\n";
  }
  return out;
}

/// Curve samples of one state, for profile plots and the reconstruction contract.
inline json curveFixture(const SpectralWaveState& s, const PhysicalParams& p, const GridSpec& grid) {
  const WaveGridFunctions g = synthesize(s, grid, p.gammaBar);
  const CurveSampling curve = renormalizedCurve(g.theta, p.M);
  return {{"params", toJson(p)}, {"nGrid", grid.size()}, {"a", s.a},        {"b", s.b},
          {"c", s.c},            {"alpha", grid.nodes()}, {"x", curve.zRe},  {"y", curve.zIm},
          {"theta", g.theta},    {"gamma", g.gamma},      {"h", displacement(curve)}};
}

inline std::string profileCsv(const SpectralWaveState& s, const PhysicalParams& p, const GridSpec& grid) {
  const WaveGridFunctions g = synthesize(s, grid, p.gammaBar);
  const CurveSampling curve = renormalizedCurve(g.theta, p.M);
  std::string out = "alpha,x,y,theta,gamma\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += fmt17(grid.alpha(j)) + "," + fmt17(curve.zRe[j]) + "," + fmt17(curve.zIm[j]) + "," + fmt17(g.theta[j]) + "," +
           fmt17(g.gamma[j]) + "\n";
  }
  return out;
}

}  // namespace hydrowave
