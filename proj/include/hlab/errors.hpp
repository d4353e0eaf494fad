#pragma once

#include <stdexcept>
#include <string>

namespace hlab {

/// An argument violates the documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Finite stand-in (arena, index scale, tree depth) cannot hold the values a
/// construction needs.
class ArenaTooSmall : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A bounded search stopped before reaching a decision.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A self-check failed on inputs that satisfied every precondition.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hlab
