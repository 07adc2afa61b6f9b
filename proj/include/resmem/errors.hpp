#pragma once

#include <stdexcept>
#include <string>

namespace resmem {

// Base for every numeric-guard failure raised by the library. The CLI maps
// all of these to exit status 3.
class NumericGuardError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Fock truncation too small, or operands with mismatched dimensions.
class DimensionError : public NumericGuardError {
  public:
    using NumericGuardError::NumericGuardError;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public NumericGuardError {
  public:
    using NumericGuardError::NumericGuardError;
};

// Caller broke a documented precondition (e.g. an unnormalized state).
class ContractError : public NumericGuardError {
  public:
    using NumericGuardError::NumericGuardError;
};

// Exponential fits on data that cannot be fit.
class FitError : public NumericGuardError {
  public:
    using NumericGuardError::NumericGuardError;
};

// Time-stepping instability or an integrator step-size violation.
class InstabilityError : public NumericGuardError {
  public:
    using NumericGuardError::NumericGuardError;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace resmem
