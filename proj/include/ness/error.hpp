#pragma once

#include <stdexcept>
#include <string>

namespace ness {

// Base class for all library errors. Subclasses map onto CLI exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files or JSON documents (exit 2).
struct ParseError : Error {
    using Error::Error;
};

// Inputs violating a documented precondition: invalid process, unbalanced
// flux field, undefined quantity requested (exit 3).
struct ValidationError : Error {
    using Error::Error;
};

// Work refused because it would exceed a configured cap (exit 4).
struct CapError : Error {
    using Error::Error;
};

// A numeric computation failed to meet its tolerance (exit 5).
struct NumericalError : Error {
    NumericalError(const std::string& what, double residual_norm)
        : Error(what), residual(residual_norm) {}
    double residual = 0.0;
};

}  // namespace ness
