#pragma once

#include <stdexcept>
#include <string>

namespace divrate {

/// Base class of all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument to an operation (bad bandwidth, empty sample, ...).
struct ArgumentError : Error {
  using Error::Error;
};

/// Two grid functions that were required to share a grid do not.
struct GridMismatchError : Error {
  using Error::Error;
};

/// Model without division (B identically zero): no positive eigenvalue exists.
struct DegenerateModelError : Error {
  using Error::Error;
};

/// Density that is identically zero cannot be sampled from.
struct DegenerateDensityError : Error {
  using Error::Error;
};

/// Denominator of a ratio estimate vanished.
struct DegenerateDenominatorError : Error {
  using Error::Error;
};

/// Iterative solver exhausted its iteration budget.
struct IterationLimitError : Error {
  IterationLimitError(const std::string& msg, double residual)
      : Error(msg), last_residual(residual) {}
  double last_residual;
};

/// Too many replications of an experiment failed.
struct ExperimentError : Error {
  using Error::Error;
};

/// File could not be read or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace divrate
