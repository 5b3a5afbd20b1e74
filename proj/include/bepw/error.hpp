#pragma once

#include <stdexcept>
#include <string>

namespace bepw {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity left its admissible domain (non-positive density, non-decaying integrand, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied parameter is out of range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An iterative solve failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The Poisson problem has no decaying solution for the given charge.
class SolvabilityError : public Error {
public:
    using Error::Error;
};

/// Time step exceeds the CFL bound.
class CflError : public Error {
public:
    CflError(const std::string& what, double admissible_dt) : Error(what), admissible_dt_(admissible_dt) {}
    double admissible_dt() const noexcept { return admissible_dt_; }

private:
    double admissible_dt_;
};

/// Malformed configuration or input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace bepw
