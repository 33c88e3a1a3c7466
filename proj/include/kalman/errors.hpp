#pragma once

#include <stdexcept>
#include <string>

namespace kalman {

// Raised when caller-supplied inputs violate a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an exact identity that must hold by construction fails,
// e.g. a rational sum that should be integral is not.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kalman
