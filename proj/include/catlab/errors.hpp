#pragma once

#include <stdexcept>
#include <string>

namespace catlab {

/// Bad input: a violated precondition, a malformed file or config value.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A model invariant failed at runtime (mass conservation, a.m.l.g., ...).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The exact enumeration would exceed its configured trace budget.
class EnumerationInfeasible : public std::runtime_error {
 public:
  EnumerationInfeasible(double predicted, double cap)
      : std::runtime_error("enumeration infeasible: predicted " + std::to_string(predicted) +
                           " traces exceeds cap " + std::to_string(cap)),
        predicted_(predicted) {}
  double predicted() const { return predicted_; }

 private:
  double predicted_;
};

}  // namespace catlab
