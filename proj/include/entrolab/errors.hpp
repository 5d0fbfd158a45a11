#pragma once

#include <stdexcept>
#include <string>

namespace entrolab {

// Bad input: malformed config, violated precondition, dimension mismatch.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative numerical routine did not reach its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entrolab
