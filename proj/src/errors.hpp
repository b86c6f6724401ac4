#pragma once

#include <stdexcept>

namespace sqsd {

// Bad argument or precondition violation (pole, out-of-range parameter).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// An iterative method failed to reach its target (series, bracketing,
// quadrature subdivision).
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A run would exceed the configured step budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerics produced a value that violates an internal invariant.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace sqsd
