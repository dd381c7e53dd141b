#pragma once

#include <stdexcept>
#include <string>

namespace gdpcast {

/// Base class for all gdpcast errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input (bad CSV, out-of-range argument, missing field).
class InputError : public Error {
public:
    using Error::Error;
};

/// Value outside the mathematical domain of an operation (log of a
/// non-positive value, zero denominator in a ratio metric).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown at runtime (degenerate variance, non-finite sum).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A model violates its own validity constraints (non-stationary polynomial,
/// failed Lyapunov solve, optimizer started at a non-finite objective).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Remote data retrieval failed.
class NetworkError : public Error {
public:
    using Error::Error;
};

} // namespace gdpcast
