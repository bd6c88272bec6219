#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace htap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (bad JSON, wrong field types, missing fields).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates an instance invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Exact solvers refuse inputs beyond their configured size limits.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// A guarantee that should hold unconditionally did not (e.g. the subtour
/// bound of a tour split). Indicates a bug or a non-metric input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace htap
