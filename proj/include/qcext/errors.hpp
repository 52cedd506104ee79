#pragma once

#include <stdexcept>
#include <string>

namespace qcext {

/// Invalid arguments or preconditions (alpha <= 0, y <= 0, malformed maps).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of an iterative or approximate numerical method.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepOutOfDisk : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ToleranceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonTermination : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qcext
