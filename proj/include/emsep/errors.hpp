#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace emsep {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input-shaped failures: bad configuration, wrong kind, schema violations.
class ConfigError : public Error {
public:
    using Error::Error;
};

class UsageError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Numerical failures (domain, singular maps, non-convergence).
class NumericError : public Error {
public:
    using Error::Error;
};

class DomainError : public NumericError {
public:
    DomainError(int axis, double value, const std::string& what)
        : NumericError(what), axis_(axis), value_(value) {}
    /// 1-based axis index, 0 when the error is not tied to an axis.
    int axis() const noexcept { return axis_; }
    double value() const noexcept { return value_; }

private:
    int axis_;
    double value_;
};

class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

class InversionError : public NumericError {
public:
    InversionError(const std::string& what, std::array<double, 3> last_iterate, double residual)
        : NumericError(what), last_(last_iterate), residual_(residual) {}
    const std::array<double, 3>& last_iterate() const noexcept { return last_; }
    double residual() const noexcept { return residual_; }

private:
    std::array<double, 3> last_;
    double residual_;
};

class IntegrationError : public NumericError {
public:
    IntegrationError(const std::string& what, double location)
        : NumericError(what), location_(location) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

class QuadratureError : public NumericError {
public:
    using NumericError::NumericError;
};

class TurningPointError : public NumericError {
public:
    TurningPointError(int axis, double location, const std::string& what)
        : NumericError(what), axis_(axis), location_(location) {}
    int axis() const noexcept { return axis_; }
    double location() const noexcept { return location_; }

private:
    int axis_;
    double location_;
};

/// A finite-difference stencil could not be evaluated at one of its nodes.
class StencilError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace emsep
