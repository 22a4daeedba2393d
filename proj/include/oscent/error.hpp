#pragma once

#include <stdexcept>
#include <string>

namespace oscent {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver a result
/// (non-convergence, divergent series, exhausted budget).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The optimum sought does not exist at finite argument, e.g. the optimal
/// particle number of an uncoupled ensemble.
class DivergentOptimum : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace oscent
