#pragma once

#include <stdexcept>
#include <string>

namespace evapfront {

// Exit codes of the command line driver; each error family maps onto one.
enum class ExitCode : int {
  success = 0,
  validation = 2,
  numerical = 3,
  halt = 4,
};

/// Rejected input: bad configuration, violated precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver or iteration failed to produce an admissible result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1 + dσ/dz fell below the configured Jacobian floor.
class DegenerateMapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An argument landed on the cut arg(w) = π of the principal square root.
class BranchCutError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Interface left the admissible band, or the well-posedness monitor fired
/// with halting enabled.
class HaltError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evapfront
