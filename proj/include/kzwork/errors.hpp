#pragma once

#include <stdexcept>
#include <string>

namespace kzwork {

// Bad input: out-of-range parameters, malformed grids, unsupported sectors.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation ran but could not meet its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepBudgetExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConstraintViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PrecisionLoss : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PoleProximity : public NumericalError {
 public:
  PoleProximity(const std::string& what, double q, double u)
      : NumericalError(what), q_(q), u_(u) {}
  double q() const { return q_; }
  double u() const { return u_; }

 private:
  double q_;
  double u_;
};

class GridTooCoarse : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kzwork
