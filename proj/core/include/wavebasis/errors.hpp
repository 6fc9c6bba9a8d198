#pragma once

#include <stdexcept>
#include <string>

namespace wavebasis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the documented domain (negative degree, α ≤ −1/2, bad index).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A point lies on (or within tolerance of) a chart boundary where the
/// requested map or phase is undefined.
class ChartError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not available for this dimension or input.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Integrand or coefficient tail does not decay fast enough for the requested tolerance.
class DecayError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (CFL violation, empty sector, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavebasis
