#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace qmfd {

/// Scientific-notation rendering for residuals and defects in messages.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

/// Base class for all structured errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two functions with different spatial dimension were combined.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An axis index outside [0, dim) was requested.
class AxisOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A nonzero function was required (the zero function is excluded from
/// every expectation-value computation).
class NonzeroRequired : public Error {
 public:
  using Error::Error;
};

/// An evaluation grid violates its coverage invariant for the degree in use.
class GridError : public Error {
 public:
  using Error::Error;
};

/// A truncated representation discarded more mass than permitted.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double discarded)
      : Error(what), discarded_mass(discarded) {}
  double discarded_mass = 0.0;
};

/// A translation plan failed its accuracy certificate.
class PlanRejected : public Error {
 public:
  PlanRejected(const std::string& what, double defect)
      : Error(what), measured_defect(defect) {}
  double measured_defect = 0.0;
};

/// An operation was called outside its stated domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A direction violates the tangency constraint of a differential's domain.
class DirectionNotTangent : public Error {
 public:
  DirectionNotTangent(const std::string& what, double measured)
      : Error(what), measured_value(measured) {}
  double measured_value = 0.0;
};

/// A sampled point does not belong to the chart it was used with.
class SampleOutsideChart : public Error {
 public:
  using Error::Error;
};

/// Invalid tool configuration (unknown suite, bad flag value, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmfd
