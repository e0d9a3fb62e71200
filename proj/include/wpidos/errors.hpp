#pragma once

#include <stdexcept>
#include <string>

namespace wpidos {

/// Caller passed arguments that do not fit together (dimension or grid mismatch).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain where the operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Gradient requested at a point where the symbol is not differentiable.
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Not enough samples or data points to produce an estimate.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a constructed object failed (truncated Gaussian,
/// unresolved field, failed hypothesis check).
class RefusedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wpidos
