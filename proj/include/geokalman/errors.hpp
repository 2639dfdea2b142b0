#pragma once

#include <stdexcept>
#include <string>

namespace geokalman {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A point or tangent left the domain of a map (cut locus, chart exit).
class OutOfDomain : public Error {
public:
  using Error::Error;
};

/// The manifold handle does not provide the requested operation.
class UnsupportedOperation : public Error {
public:
  using Error::Error;
};

class SingularInnovation : public Error {
public:
  using Error::Error;
};

class DegenerateCovariance : public Error {
public:
  using Error::Error;
};

class BarycenterDivergence : public Error {
public:
  using Error::Error;
};

/// Raised when the noise Jacobians needed by covariance matching are not
/// invertible. Callers keep their previous covariances.
class AdaptationNotApplicable : public Error {
public:
  using Error::Error;
};

/// Wraps any error raised inside a filter run with the step that failed.
class FilterStepError : public Error {
public:
  FilterStepError(int step, const std::string& what)
      : Error("filter step " + std::to_string(step) + ": " + what), step_(step) {}

  int step() const noexcept { return step_; }

private:
  int step_;
};

}  // namespace geokalman
