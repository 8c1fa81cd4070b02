#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hydrowave {

enum class ErrorKind {
  InvalidParams,
  Resolution,
  Symmetry,
  Precondition,
  DegenerateCurve,
  SingularCurve,
  NumericalBlowup,
  Stagnation,
  NoTravelingWave,
  DegenerateSpeed,
  WiltonNonexistence,
  Usage,
  Io,
};

inline std::string_view toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "invalid-params";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Symmetry: return "symmetry";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DegenerateCurve: return "degenerate-curve";
    case ErrorKind::SingularCurve: return "singular-curve";
    case ErrorKind::NumericalBlowup: return "numerical-blowup";
    case ErrorKind::Stagnation: return "stagnation";
    case ErrorKind::NoTravelingWave: return "no-traveling-wave";
    case ErrorKind::DegenerateSpeed: return "degenerate-speed";
    case ErrorKind::WiltonNonexistence: return "wilton-nonexistence";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(toString(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hydrowave
