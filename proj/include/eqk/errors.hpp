#pragma once

#include <stdexcept>

namespace eqk {

// Thrown when a computation would exceed a hard resource guard
// (dense-backend qubit cap, grid pair budget, statevector width).
// Callers that map errors to exit codes treat this as a guard
// violation, distinct from invalid input.
class guard_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqk
