#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ceep {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape mismatch (non-square input, vector length != matrix order, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input outside the domain of an operation (n < 2 for irreducibility, unstable step size, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Floating-point overflow or non-finite intermediate result.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid graph (self-loop, out-of-range index, duplicate edge).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace ceep
