#pragma once

#include <stdexcept>
#include <string>

namespace mckp {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Division requested by a series whose constant term vanishes.
struct NonUnit : Error {
    explicit NonUnit(const std::string& msg) : Error(msg) {}
};

// exp of a jet with nonzero constant term, or log of a non-unit jet.
struct BadConstantTerm : Error {
    explicit BadConstantTerm(const std::string& msg) : Error(msg) {}
};

// A tau value was requested at a charge vector outside the stored window.
struct OutsideWindow : Error {
    explicit OutsideWindow(const std::string& msg) : Error(msg) {}
};

// An auxiliary-variable extraction (residue, coefficient) fell outside
// the trusted exponent window of the operand.
struct RangeTooNarrow : Error {
    explicit RangeTooNarrow(const std::string& msg) : Error(msg) {}
};

// Component or time index out of the configured range.
struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

// An identity was instantiated with indices required to be distinct.
struct IndicesNotDistinct : Error {
    explicit IndicesNotDistinct(const std::string& msg) : Error(msg) {}
};

// Operator inversion requested for an operand that is not 1 + (lower order).
struct NotUnitShape : Error {
    explicit NotUnitShape(const std::string& msg) : Error(msg) {}
};

// A pseudodifferential computation needs band depth beyond the trusted floor.
struct BandOverflow : Error {
    explicit BandOverflow(const std::string& msg) : Error(msg) {}
};

// Two independent constructions that must agree disagreed; indicates a bug,
// never a property of the input data.
struct InternalMismatch : Error {
    explicit InternalMismatch(const std::string& msg) : Error(msg) {}
};

// Invalid parameters for a solution family constructor.
struct BadParams : Error {
    explicit BadParams(const std::string& msg) : Error(msg) {}
};

// The order-by-order linear system for a jet solve has no solution.
struct Inconsistent : Error {
    explicit Inconsistent(const std::string& msg) : Error(msg) {}
};

// Malformed tau-function text file.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Malformed or incomplete run configuration.
struct ConfigInvalid : Error {
    explicit ConfigInvalid(const std::string& msg) : Error(msg) {}
};

} // namespace mckp
