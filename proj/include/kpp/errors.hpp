#pragma once

#include <stdexcept>
#include <string>

namespace kpp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (x outside [0, X_max], k < M, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Violated parameter precondition (K <= 1, c >= 2 sqrt(mu), ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The input collapses a formula: constant profiles, empty plateaus.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse for the discrete operator to keep its sign structure.
class DiscretizationError : public Error {
 public:
  using Error::Error;
};

/// Time stepper left the invariant region [0, 1].
class SchemeError : public Error {
 public:
  using Error::Error;
};

/// A verifier found no admissible points to check.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration failed validation; message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kpp
