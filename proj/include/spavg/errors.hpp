#pragma once

#include <stdexcept>
#include <string>

namespace spavg {

// Common base so callers can catch every domain error in one clause.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- grid / configuration ---
struct StabilityViolation : Error {
  using Error::Error;
};
struct DomainTooSmall : Error {
  using Error::Error;
};
struct NonIntegerCount : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

// --- kernels / quadrature ---
struct NonpositiveTime : Error {
  using Error::Error;
};
struct BadTimeOrder : Error {
  using Error::Error;
};
struct ZeroFrequency : Error {
  using Error::Error;
};
struct NonFiniteIntegrand : Error {
  NonFiniteIntegrand(const std::string& msg, double where)
      : Error(msg), location(where) {}
  double location;
};
struct QuadratureFailure : Error {
  QuadratureFailure(const std::string& msg, double best_value, double best_error)
      : Error(msg), value(best_value), abs_error_estimate(best_error) {}
  double value;
  double abs_error_estimate;
};

// --- noise synthesis ---
struct NegativeSpectrumClipped : Error {
  NegativeSpectrumClipped(const std::string& msg, double fraction)
      : Error(msg), clipped_fraction(fraction) {}
  double clipped_fraction;
};

// --- solver / observation ---
struct NaNDetected : Error {
  NaNDetected(const std::string& msg, long step) : Error(msg), step_index(step) {}
  long step_index;
};
struct OffGridTime : Error {
  using Error::Error;
};
struct OutOfDomain : Error {
  using Error::Error;
};
struct NonAdditiveSigma : Error {
  using Error::Error;
};

// --- statistics ---
struct EmptySample : Error {
  using Error::Error;
};
struct ZeroVariance : Error {
  using Error::Error;
};
struct TooFewSamples : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct NonpositiveValue : Error {
  using Error::Error;
};
struct TooFewPoints : Error {
  using Error::Error;
};

}  // namespace spavg
