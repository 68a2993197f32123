#pragma once

#include <stdexcept>
#include <string>

namespace gpr4 {

/// Field shapes or grid sizes that do not fit together.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function (T <= 0, t <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Physically invalid state: negative internal energy, inverted distortion, ...
class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid case, policy, or config file.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative solver failure. Carries the iteration count and the last
/// relative residual so the caller can report them.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int iterations, double residual)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

/// Negative density after the explicit step; the caller may retry with a
/// smaller time step.
class TimeStepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gpr4
