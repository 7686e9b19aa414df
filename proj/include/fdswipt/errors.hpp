#pragma once

#include <stdexcept>
#include <string>

namespace fdswipt {

/// Input violates a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Uplink SINR targets cannot be met with the available power.
class InfeasibleUplink : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Projected channel too small for zero forcing.
class DegenerateChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fdswipt
