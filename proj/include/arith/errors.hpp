#pragma once

#include <stdexcept>
#include <string>

namespace arith {

/// Input outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bounded search (algebra presentation, order saturation, lattice
/// enumeration cap) ran out of budget.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The norm equation behind an anticommuting pair has no local solution.
class NotLocallyRepresented : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ball sums did not agree on two consecutive radii before r_max.
class NonStabilizing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Central derivative coefficient requested where the generic fiber of the
/// cycle is empty.
class EmptyCycle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not reach the requested tolerance.
class PrecisionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arith
