#pragma once

#include <stdexcept>
#include <string>

namespace ucplan {

/// Base class for all ucplan errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a precondition (non-finite entries, shape mismatch, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Input is structurally degenerate (e.g. all-zero matrix fed to the
/// scaling decomposition).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible is singular or nearly so. Carries a
/// condition-number estimate when one is available.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what, double condition = 0.0)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Partition indices are out of range, duplicated, or otherwise unusable.
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// The task cannot be satisfied within joint limits even with full scaling.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Configuration file / experiment setup problem.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ucplan
