#pragma once

#include <stdexcept>
#include <string>

namespace crn {

/// Invalid model data or malformed input (bad file, bad flag, broken invariant).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside a function's mathematical domain (nonpositive state, negative time).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (solver did not converge, positivity lost, saturation hit).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace crn
