#pragma once

#include <stdexcept>
#include <string>

namespace fracsing {

/// Precondition violated by the caller (bad parameters, mismatched grids, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed in a way that indicates a fault rather than
/// a mathematical outcome (stagnation, loss of monotonicity, bad conditioning).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requested computation is outside the regime where it is defined,
/// e.g. a second solution above the extremal parameter.
class InvalidRegime : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace fracsing
