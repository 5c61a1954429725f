#pragma once

#include <stdexcept>
#include <string>

namespace rwppt {

/// Argument outside the mathematical domain of a function (x outside a support, x in {0,1} for h).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller passed inconsistent arguments (dimension mismatch, inadmissible temperature pair).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its tolerance within budget.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

/// The spacing optimizer cannot locate an interior maximum.
class OptimizerConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model does not satisfy the hypotheses of the geometric-ladder construction.
class ModelMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A chain state left the support; unreachable from valid states.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rwppt
