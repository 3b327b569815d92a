#pragma once

#include <stdexcept>
#include <string>

namespace besovch {

// Raised for contract violations on inputs (bad grid sizes, unsupported norms, malformed configs).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a grid cannot host the requested frequency content.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a computation produces non-finite values or the time step collapses.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a run passes its wall-clock deadline; the message reports how far it got.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File and stream failures; the message always names the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace besovch
