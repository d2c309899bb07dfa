#pragma once

#include <stdexcept>
#include <string>

namespace seglab {

// One exception type for all precondition violations; `kind` carries the
// machine-readable code, what() the human-readable context.
enum class ErrorKind {
  // grouping
  NonMonotoneBreakpoints,
  EndpointMismatch,
  IndexOutOfRange,
  NotSymmetric,
  NonzeroIntraGroup,
  ZeroCrossGroup,
  NegativeEntry,
  // grid
  InvalidGrid,
  DimensionMismatch,
  ShapeMismatch,
  NonFiniteField,
  BallOutsideDomain,
  RadiusBelowResolution,
  // solver
  InvalidForcing,
  InvalidSolverConfig,
  ScheduleTooShort,
  NotAscending,
  // diagnostics
  WindowOutsideDomain,
  WindowTooSmall,
  AlphaOutOfRange,
  NotCrossPair,
  // freeboundary
  ThresholdOutOfRange,
  ZeroH,
  NotOnNodalSet,
  WrongClass,
  VanishingSideGradient,
  NoRaysFound,
  // cli / io
  ConfigError,
  IoError,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonMonotoneBreakpoints: return "NonMonotoneBreakpoints";
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NonzeroIntraGroup: return "NonzeroIntraGroup";
    case ErrorKind::ZeroCrossGroup: return "ZeroCrossGroup";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonFiniteField: return "NonFiniteField";
    case ErrorKind::BallOutsideDomain: return "BallOutsideDomain";
    case ErrorKind::RadiusBelowResolution: return "RadiusBelowResolution";
    case ErrorKind::InvalidForcing: return "InvalidForcing";
    case ErrorKind::InvalidSolverConfig: return "InvalidSolverConfig";
    case ErrorKind::ScheduleTooShort: return "ScheduleTooShort";
    case ErrorKind::NotAscending: return "NotAscending";
    case ErrorKind::WindowOutsideDomain: return "WindowOutsideDomain";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::NotCrossPair: return "NotCrossPair";
    case ErrorKind::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorKind::ZeroH: return "ZeroH";
    case ErrorKind::NotOnNodalSet: return "NotOnNodalSet";
    case ErrorKind::WrongClass: return "WrongClass";
    case ErrorKind::VanishingSideGradient: return "VanishingSideGradient";
    case ErrorKind::NoRaysFound: return "NoRaysFound";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) fail(kind, msg);
}

}  // namespace seglab
