#pragma once

#include <stdexcept>
#include <string>

namespace weakkam {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (tau <= 0, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or unsupported configuration (grid size, dimension, memory cap).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed data handed to an algorithm (negative weights, non-finite costs).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical solve failed to reach its stated accuracy.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Newton or integrator failure in the phase-space flows.
class FlowError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A post-condition that theory guarantees was violated.
class InternalError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace weakkam
