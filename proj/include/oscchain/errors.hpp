#pragma once

#include <stdexcept>
#include <string>

namespace oscchain {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid/operator dimension or window addressing problems.
struct DomainError : Error {
  using Error::Error;
};

// A matrix inversion whose residual ||U U^{-1} - 1|| exceeds the allowed
// threshold. Carries the measured residual.
struct IllConditionedError : Error {
  double residual;
  IllConditionedError(const std::string& msg, double res)
      : Error(msg + " (residual " + std::to_string(res) + ")"), residual(res) {}
};

// A formal operator monomial outside the basis on which the standard
// representative F is defined.
struct UnsupportedBasisError : Error {
  using Error::Error;
};

// Brute-force enumeration would exceed the configuration budget.
struct BudgetError : Error {
  double configuration_count;
  BudgetError(const std::string& msg, double count)
      : Error(msg), configuration_count(count) {}
};

// An exterior-irrelevance fixture whose two exteriors do not induce the
// same boundary state.
struct InvalidFixtureError : Error {
  using Error::Error;
};

// Field-grid spacing too coarse for the requested Euclidean step.
struct CouplingError : Error {
  using Error::Error;
};

// Bad config file (CLI).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace oscchain
