#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace regge {

// Error taxonomy shared across all modules. The CLI maps each type to a
// fixed exit code (see README).

// Malformed or inconsistent input: bad config keys, grids too coarse,
// polynomials that are not C^p where required.
struct ValidationError : std::runtime_error {
  std::string field;
  explicit ValidationError(const std::string& msg, std::string field_ = "")
      : std::runtime_error(msg), field(std::move(field_)) {}
};

// Input violates a model assumption (positivity of the conformal factor,
// degenerate jump where a nonzero one is required).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed to meet its own contract (series did not
// converge, winding number not close to an integer, Picard increments not
// contracting).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Result is resolution-limited: the caller should rerun with a finer grid.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ill-posed data encountered (S-function denominator vanishing, etc.).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation requested outside a function's domain of validity.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GammaPoleError : DomainError {
  long nearest_pole;
  GammaPoleError(const std::string& msg, long nearest)
      : DomainError(msg), nearest_pole(nearest) {}
};

}  // namespace regge
