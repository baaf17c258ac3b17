#pragma once

#include <stdexcept>
#include <string>

namespace ncilab {

/// Bad argument value (out-of-range index, malformed configuration, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input lies outside the mathematical domain of the operation
/// (negative entry under a fractional power, non-PSD operand, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent block partition or operand shapes.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The exponent is valid in general but not for this operation
/// (e.g. a dual witness for p = 1 is not unique).
class UnsupportedExponent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A zero entry where the formula has a negative Hadamard power.
class BoundarySingularity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace ncilab
