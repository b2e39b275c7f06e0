#pragma once

#include <stdexcept>
#include <string>

namespace obm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or data bundle violates its documented invariants.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A field was asked for a derivative it does not carry.
class MissingDerivative : public Error {
public:
    using Error::Error;
};

/// An operation needs a solution field that was not supplied.
class MissingSolution : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double previous, double last)
        : Error(what), previous_(previous), last_(last) {}

    double previous_estimate() const noexcept { return previous_; }
    double last_estimate() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

/// An approximation or flux is outside the admissible set at a sample point.
class InadmissibleError : public Error {
public:
    InadmissibleError(const std::string& what, double x, double t)
        : Error(what), x_(x), t_(t) {}

    double x() const noexcept { return x_; }
    double t() const noexcept { return t_; }

private:
    double x_;
    double t_;
};

/// Iterative solver stopped before reaching its tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace obm
