#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation not available for this measure (no density, no closed form).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical failure: non-convergence, ill-conditioning, lost positivity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss rule produced a node at (or next to) zero.
class DegenerateNodeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Moment (Hankel) matrix not numerically positive definite.
class IllConditionedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Vandermonde system with repeated nodes.
class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Atom rates not all positive: the truncation level is above the
/// positivity threshold of the high-order construction.
class EpsilonTooLargeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A simulated path produced a non-finite state.
class PathFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Too few usable points for a regression.
class InsufficientDataError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Invalid experiment configuration (schema violation, unknown field).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace levy
