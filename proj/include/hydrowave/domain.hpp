#pragma once

// Problem constants, the collocation grid, and the truncated Fourier
// representation of a symmetric traveling wave (theta odd, gamma even).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydrowave/errors.hpp"
#include "hydrowave/spectral.hpp"

namespace hydrowave {

/// Nondimensional constants of one interfacial hydroelastic problem.
struct PhysicalParams {
  double S = 1.0;         // bending modulus
  double A = 1.0;         // Atwood number
  double Atilde = 0.0;    // sheet mass ratio
  double tau1 = 1.0;      // surface tension parameter
  double gammaBar = 0.0;  // mean vortex sheet strength
  double M = 2.0 * std::numbers::pi;  // horizontal period

  void validate() const {
    if (!(S > 0.0)) throw Error(ErrorKind::InvalidParams, "S must be positive");
    if (!(tau1 > 0.0)) throw Error(ErrorKind::InvalidParams, "tau1 must be positive");
    if (!(M > 0.0)) throw Error(ErrorKind::InvalidParams, "M must be positive");
    if (!(std::abs(A) <= 1.0)) throw Error(ErrorKind::InvalidParams, "|A| must be <= 1");
    if (!(Atilde >= 0.0)) throw Error(ErrorKind::InvalidParams, "Atilde must be >= 0");
    if (!std::isfinite(gammaBar)) throw Error(ErrorKind::InvalidParams, "gammaBar must be finite");
  }

  bool operator==(const PhysicalParams&) const = default;
};

/// Equispaced collocation nodes alpha_j = -pi + j * dalpha on [-pi, pi).
class GridSpec {
 public:
  explicit GridSpec(std::size_t nGrid) : n_(nGrid) {
    if (n_ < 4 || n_ % 2 != 0) {
      throw Error(ErrorKind::Resolution, "nGrid must be even and >= 4, got " + std::to_string(n_));
    }
  }

  /// Default oversampled grid for K modes: 4K + 4 nodes.
  static GridSpec forModes(std::size_t K) { return GridSpec(4 * K + 4); }

  /// Largest K for which this grid keeps the 2x dealiasing margin.
  std::size_t dealiasedModes() const { return n_ / 4 - 1; }

  std::size_t size() const { return n_; }
  double spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(n_); }
  double alpha(std::size_t j) const { return -std::numbers::pi + static_cast<double>(j) * spacing(); }

  std::vector<double> nodes() const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = alpha(j);
    return out;
  }

  /// Index of the node at -alpha_j.
  std::size_t mirror(std::size_t j) const { return (n_ - j) % n_; }

  void requireModes(std::size_t K) const {
    if (n_ < 2 * K + 2) {
      throw Error(ErrorKind::Resolution,
                  "grid of " + std::to_string(n_) + " nodes cannot carry " + std::to_string(K) + " modes");
    }
  }

 private:
  std::size_t n_;
};

/// theta = sum a_k sin(k alpha), gamma = gammaBar + sum b_k cos(k alpha), speed c.
struct SpectralWaveState {
  std::vector<double> a;
  std::vector<double> b;
  double c = 0.0;

  SpectralWaveState() = default;
  explicit SpectralWaveState(std::size_t K, double speed = 0.0) : a(K, 0.0), b(K, 0.0), c(speed) {}
  SpectralWaveState(std::vector<double> sine, std::vector<double> cosine, double speed)
      : a(std::move(sine)), b(std::move(cosine)), c(speed) {
    if (a.size() != b.size()) throw Error(ErrorKind::Precondition, "a and b must have equal length");
  }

  std::size_t K() const { return a.size(); }
  std::size_t unknowns() const { return 2 * a.size() + 1; }

  /// Flattened unknown vector (a_1..a_K, b_1..b_K, c).
  std::vector<double> pack() const {
    std::vector<double> x;
    x.reserve(unknowns());
    x.insert(x.end(), a.begin(), a.end());
    x.insert(x.end(), b.begin(), b.end());
    x.push_back(c);
    return x;
  }

  static SpectralWaveState unpack(std::span<const double> x) {
    if (x.size() % 2 != 1) throw Error(ErrorKind::Precondition, "unknown vector must have odd length 2K+1");
    const std::size_t K = x.size() / 2;
    SpectralWaveState s(K);
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(K), s.a.begin());
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(K), x.begin() + static_cast<std::ptrdiff_t>(2 * K), s.b.begin());
    s.c = x.back();
    return s;
  }

  bool operator==(const SpectralWaveState&) const = default;
};

struct WaveGridFunctions {
  RealGrid theta;
  RealGrid gamma;
};

inline WaveGridFunctions synthesize(const SpectralWaveState& state, const GridSpec& grid, double gammaBar) {
  grid.requireModes(state.K());
  const std::vector<double> none;
  return {synthesizeSeries(state.a, none, 0.0, grid.size()), synthesizeSeries(none, state.b, gammaBar, grid.size())};
}

struct AnalyzedWave {
  SpectralWaveState state;  // c left at zero
  double gammaBar = 0.0;
};

/// Inverse of synthesize. Modes beyond K are discarded; theta must be odd and
/// gamma even about alpha = 0 to within `parityTol` (relative to max |value|).
inline AnalyzedWave analyze(std::span<const double> theta, std::span<const double> gamma, std::size_t K,
                            double parityTol = 1e-10) {
  if (theta.size() != gamma.size()) throw Error(ErrorKind::Precondition, "grid functions differ in length");
  const GridSpec grid(theta.size());
  grid.requireModes(K);
  double thetaScale = 1.0, gammaScale = 1.0, thetaDefect = 0.0, gammaDefect = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const std::size_t m = grid.mirror(j);
    thetaScale = std::max(thetaScale, std::abs(theta[j]));
    gammaScale = std::max(gammaScale, std::abs(gamma[j]));
    thetaDefect = std::max(thetaDefect, std::abs(theta[j] + theta[m]));
    gammaDefect = std::max(gammaDefect, std::abs(gamma[j] - gamma[m]));
  }
  // The node at alpha = -pi is its own mirror, so an odd theta must vanish there.
  if (thetaDefect > parityTol * thetaScale) throw Error(ErrorKind::Symmetry, "theta is not odd");
  if (gammaDefect > parityTol * gammaScale) throw Error(ErrorKind::Symmetry, "gamma is not even");
  AnalyzedWave out;
  out.state.a = sineCoefficients(theta, K);
  out.state.b = cosineCoefficients(gamma, K);
  out.gammaBar = mean(gamma);
  return out;
}

}  // namespace hydrowave
