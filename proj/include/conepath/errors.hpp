#pragma once

#include <stdexcept>
#include <string>

namespace conepath {

// Base class for every failure raised by the library. The CLI maps
// validation-type errors to exit code 2 and numerical ones to 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or non-finite physical parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (|z| >= 1, n too large, grid too narrow).
class DomainError : public Error {
public:
    using Error::Error;
};

// Grid/cone misalignment, insufficient resolution, malformed config files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// NaN/Inf or empty input data.
class DataError : public Error {
public:
    using Error::Error;
};

// A quadrature or series did not reach its target. Carries the achieved estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// Norm blow-up during a time march.
class StabilityError : public Error {
public:
    using Error::Error;
};

// Failure of a linear solve or similar numerical kernel.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace conepath
