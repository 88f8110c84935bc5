#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace retset {

// Bad input: schema violation, broken precondition, out-of-range value.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well-formed but outside the supported fragment.
class UnsupportedInstance : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A configured work or degree budget ran out. The CLI maps this to exit
// code 3.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A specialization point annihilated a denominator; callers retry with a
// fresh point.
class BadSpecialization : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Counts abstract "coefficient operations". Shared by polynomial kernels
// and solvers so a runaway instance fails fast instead of hanging.
struct WorkBudget {
  std::uint64_t limit = UINT64_MAX;
  std::uint64_t used = 0;

  void charge(std::uint64_t amount) {
    used += amount;
    if (used > limit) {
      throw ResourceError("work budget exceeded (" + std::to_string(used) +
                          " > " + std::to_string(limit) + " coefficient ops)");
    }
  }
};

inline void charge(WorkBudget* budget, std::uint64_t amount) {
  if (budget != nullptr) budget->charge(amount);
}

}  // namespace retset
