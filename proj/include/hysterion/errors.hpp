#pragma once

#include <stdexcept>
#include <string>

namespace hyst {

// Error taxonomy shared by all modules. Every condition a caller can
// reasonably branch on gets its own type; generic argument mistakes use
// std::invalid_argument.

struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// State left the basin of anything physical (|x| > bound) or became NaN.
struct NonFinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time span is not a whole number of forcing periods.
struct BadSpan : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters sit between the few-orbit and one-orbit regimes where the
// orbit count is not classifiable.
struct AmbiguousRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requires a specific parameter regime and got another one.
struct RegimeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Power-law fit input with a non-positive coordinate.
struct NonPositive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hyst
