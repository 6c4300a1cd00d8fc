#pragma once

#include <stdexcept>
#include <string>

namespace opuczeros {

/// Base class for every failure raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Weight violates a family constraint (negative values, zero total mass, bad parameter).
class InvalidWeightError : public Error {
public:
    using Error::Error;
};

/// Periodic quadrature failed to meet the requested tolerance before the node cap.
class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& message, double residual)
        : Error(message), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// log W is not integrable in practice: some node has W <= 0 (or below 1e-300).
class SzegoClassViolation : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Toeplitz moment matrix lost positive definiteness during the recursion.
class MomentDegeneracyError : public Error {
public:
    MomentDegeneracyError(int step, const std::string& message)
        : Error(message), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

/// Point inside the exclusion band around |z| = 1 where the closed forms cancel.
class NearCircleError : public Error {
public:
    using Error::Error;
};

/// K_n(z,z) vanished where it must not.
class DegeneratePointError : public Error {
public:
    using Error::Error;
};

/// A quantity violated a rounding-level bound; indicates a logic bug, not noise.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

/// Region quadrature did not converge before the cell cap.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& message, double previous_estimate, double last_estimate)
        : Error(message), previous_(previous_estimate), last_(last_estimate) {}
    double previous_estimate() const noexcept { return previous_; }
    double last_estimate() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

/// Simultaneous root iteration missed its residual target.
class RootFindingFailure : public Error {
public:
    RootFindingFailure(const std::string& message, double worst_residual)
        : Error(message), worst_residual_(worst_residual) {}
    double worst_residual() const noexcept { return worst_residual_; }

private:
    double worst_residual_;
};

/// All polynomial coefficients are zero.
class DegeneratePolynomialError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration (CLI / JSON input).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace opuczeros
