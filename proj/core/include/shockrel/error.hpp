#pragma once

#include <stdexcept>
#include <string>

namespace shockrel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative time,
/// s = 0 for a divergent transform, t >= theta for a series outside its
/// radius of convergence, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (e.g. a probability outside
/// [0, 1] handed to the reliability assembly).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Invalid model ingredients or invalid experiment inputs.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The requested method cannot handle this model (e.g. series expansion with
/// dependent increments). Callers are expected to fall back to another method.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Target value is not bracketed by a monotone inversion interval.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Numerical Laplace inversion produced a non-finite value.
class InversionError : public Error {
 public:
  using Error::Error;
};

/// Series truncation would require an unreasonable number of terms.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace shockrel
