#pragma once

// Periodic pseudospectral primitives on an equispaced grid of n nodes
// covering one 2*pi period. All symbol operators zero the Nyquist mode.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "hydrowave/errors.hpp"

namespace hydrowave {

using cplx = std::complex<double>;
using RealGrid = std::vector<double>;
using ComplexGrid = std::vector<cplx>;

namespace detail {

// Unnormalized DFT, sign -1 forward, +1 inverse. The FFT object caches
// plans, so each thread keeps its own.
inline void dft(std::vector<cplx>& x, bool inverse) {
  if (x.size() <= 1) return;
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  std::vector<cplx> out;
  if (inverse) {
    fft.inv(out, x);
  } else {
    fft.fwd(out, x);
  }
  x = std::move(out);
}

}  // namespace detail

/// Signed wavenumber of FFT slot `index` on an n-point grid.
inline long wavenumber(std::size_t index, std::size_t n) {
  return index <= n / 2 ? static_cast<long>(index) : static_cast<long>(index) - static_cast<long>(n);
}

/// Normalized forward transform: nu_j = sum_k hat[k] exp(2 pi i j k / n).
inline ComplexGrid forwardTransform(std::span<const cplx> v) {
  ComplexGrid hat(v.begin(), v.end());
  detail::dft(hat, false);
  const double scale = 1.0 / static_cast<double>(hat.size());
  for (auto& h : hat) h *= scale;
  return hat;
}

inline ComplexGrid forwardTransform(std::span<const double> v) {
  ComplexGrid c(v.begin(), v.end());
  return forwardTransform(std::span<const cplx>(c));
}

inline ComplexGrid inverseTransform(std::span<const cplx> hat) {
  ComplexGrid v(hat.begin(), hat.end());
  detail::dft(v, true);
  return v;
}

inline RealGrid realPart(std::span<const cplx> v) {
  RealGrid out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

inline RealGrid imagPart(std::span<const cplx> v) {
  RealGrid out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].imag();
  return out;
}

inline ComplexGrid toComplex(std::span<const double> v) { return ComplexGrid(v.begin(), v.end()); }

/// Multiplies the spectrum by symbol(k) for |k| < n/2; Nyquist and any mode
/// with an odd n's missing partner are zeroed.
template <class Symbol>
ComplexGrid applySymbol(std::span<const cplx> v, Symbol&& symbol) {
  const std::size_t n = v.size();
  ComplexGrid hat = forwardTransform(v);
  for (std::size_t i = 0; i < n; ++i) {
    const long k = wavenumber(i, n);
    if (n % 2 == 0 && i == n / 2) {
      hat[i] = 0.0;
    } else {
      hat[i] *= symbol(k);
    }
  }
  return inverseTransform(hat);
}

template <class Symbol>
RealGrid applySymbol(std::span<const double> v, Symbol&& symbol) {
  ComplexGrid c = toComplex(v);
  return realPart(applySymbol(std::span<const cplx>(c), std::forward<Symbol>(symbol)));
}

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline cplx mean(std::span<const cplx> v) {
  cplx s{0.0, 0.0};
  for (const auto& x : v) s += x;
  return v.empty() ? cplx{} : s / static_cast<double>(v.size());
}

/// Periodic Hilbert transform, symbol -i sgn(k).
template <class T>
std::vector<T> hilbert(std::span<const T> v) {
  return applySymbol(v, [](long k) {
    if (k == 0) return cplx{0.0, 0.0};
    return cplx{0.0, k > 0 ? -1.0 : 1.0};
  });
}

template <class T>
std::vector<T> hilbert(const std::vector<T>& v) {
  return hilbert(std::span<const T>(v));
}

/// n-th spectral derivative, symbol (ik)^n.
template <class T>
std::vector<T> derivative(std::span<const T> v, int order = 1) {
  if (order < 1) throw Error(ErrorKind::Precondition, "derivative order must be >= 1");
  return applySymbol(v, [order](long k) { return std::pow(cplx{0.0, static_cast<double>(k)}, order); });
}

template <class T>
std::vector<T> derivative(const std::vector<T>& v, int order = 1) {
  return derivative(std::span<const T>(v), order);
}

/// Smoothing inverse of the fourth derivative: k^-4 for k != 0, zero mean.
template <class T>
std::vector<T> inverseDerivative4(std::span<const T> v) {
  return applySymbol(v, [](long k) {
    if (k == 0) return cplx{0.0, 0.0};
    const double kk = static_cast<double>(k);
    return cplx{1.0 / (kk * kk * kk * kk), 0.0};
  });
}

template <class T>
std::vector<T> inverseDerivative4(const std::vector<T>& v) {
  return inverseDerivative4(std::span<const T>(v));
}

/// Mean-zero projection.
template <class T>
std::vector<T> project(std::span<const T> v) {
  const T m = mean(v);
  std::vector<T> out(v.begin(), v.end());
  for (auto& x : out) x -= m;
  return out;
}

template <class T>
std::vector<T> project(const std::vector<T>& v) {
  return project(std::span<const T>(v));
}

/// Mean-zero antiderivative, symbol (ik)^-1. Input must have zero mean.
template <class T>
std::vector<T> antiderivative(std::span<const T> v, double meanTol = 1e-12) {
  double scale = 1.0;
  for (const auto& x : v) scale = std::max(scale, std::abs(x));
  if (std::abs(mean(v)) > meanTol * scale) {
    throw Error(ErrorKind::Precondition, "antiderivative requires a mean-zero input");
  }
  return applySymbol(v, [](long k) {
    if (k == 0) return cplx{0.0, 0.0};
    return cplx{0.0, -1.0 / static_cast<double>(k)};
  });
}

template <class T>
std::vector<T> antiderivative(const std::vector<T>& v, double meanTol = 1e-12) {
  return antiderivative(std::span<const T>(v), meanTol);
}

// Coefficients relative to the grid alpha_j = -pi + j*2pi/n. For a real grid
// function nu = c0 + sum_k (b_k cos k alpha + a_k sin k alpha), returns a_k or
// b_k for k = 1..count. Modes at or above n/2 are reported as zero.

inline RealGrid sineCoefficients(std::span<const double> v, std::size_t count) {
  const std::size_t n = v.size();
  const ComplexGrid hat = forwardTransform(v);
  RealGrid a(count, 0.0);
  for (std::size_t k = 1; k <= count && k < (n + 1) / 2; ++k) {
    const double phase = (k % 2 == 0) ? 1.0 : -1.0;
    a[k - 1] = -2.0 * phase * hat[k].imag();
  }
  return a;
}

inline RealGrid cosineCoefficients(std::span<const double> v, std::size_t count) {
  const std::size_t n = v.size();
  const ComplexGrid hat = forwardTransform(v);
  RealGrid b(count, 0.0);
  for (std::size_t k = 1; k <= count && k < (n + 1) / 2; ++k) {
    const double phase = (k % 2 == 0) ? 1.0 : -1.0;
    b[k - 1] = 2.0 * phase * hat[k].real();
  }
  return b;
}

/// Grid values of sum_k a_k sin(k alpha_j) + b_k cos(k alpha_j) + offset.
inline RealGrid synthesizeSeries(std::span<const double> sineCoeffs, std::span<const double> cosineCoeffs,
                                 double offset, std::size_t n) {
  ComplexGrid hat(n, cplx{0.0, 0.0});
  hat[0] = offset;
  auto put = [&](std::size_t k, cplx ck) {
    if (k >= (n + 1) / 2) return;
    const double phase = (k % 2 == 0) ? 1.0 : -1.0;
    hat[k] += phase * ck;
    hat[n - k] += phase * std::conj(ck);
  };
  for (std::size_t k = 1; k <= sineCoeffs.size(); ++k) put(k, cplx{0.0, -0.5 * sineCoeffs[k - 1]});
  for (std::size_t k = 1; k <= cosineCoeffs.size(); ++k) put(k, cplx{0.5 * cosineCoeffs[k - 1], 0.0});
  return realPart(inverseTransform(hat));
}

}  // namespace hydrowave
