#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Young function that vanishes somewhere on (0, inf), so that ratios
/// such as Phi(2t)/Phi(t) are undefined.
class DegenerateFunctionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative numerical procedure ran out of budget. The best value
/// reached so far is kept so callers can still report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial_value,
                   double error_estimate)
      : std::runtime_error(what),
        partial_value_(partial_value),
        error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orlicz
