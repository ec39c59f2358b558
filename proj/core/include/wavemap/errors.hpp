#pragma once

#include <stdexcept>
#include <string>

namespace wavemap {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input arrays do not match the grid.
struct DimensionError : Error {
    using Error::Error;
};

/// A field contains NaN or Inf; the state can no longer be trusted.
struct PoisonedStateError : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// The Crank-Nicolson fixed-point iteration failed to converge.
/// Distinct from physical blow-up: carries the last iteration residual.
struct StepDivergenceError : Error {
    StepDivergenceError(const std::string& msg, double residual_, double t_)
        : Error(msg), residual(residual_), t(t_) {}
    double residual;
    double t;
};

/// Adaptive ODE integration failed (step underflow, blow-up, step budget).
struct IntegrationError : Error {
    IntegrationError(const std::string& msg, double where_) : Error(msg), where(where_) {}
    double where;
};

/// No sign change found when one was required (shooting scan, bisection setup).
struct BracketError : Error {
    using Error::Error;
};

/// Requested self-similar branch not found within the slope search range.
struct BranchNotFoundError : Error {
    using Error::Error;
};

/// A crossing of pi/2 is tangent to within tolerance; the count is ill-defined.
struct AmbiguousCrossingError : Error {
    using Error::Error;
};

/// Record lacks the snapshots or samples an analysis needs.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Fit over a non-monotone or degenerate tail.
struct EstimationError : Error {
    using Error::Error;
};

/// Root sits on the boundary of the requested scan range; widen the range.
struct RangeAdvisoryError : Error {
    using Error::Error;
};

/// Measured convergence order is undefined (errors non-monotone under refinement).
struct OrderUndefinedError : Error {
    using Error::Error;
};

/// Bad or unknown configuration key/value.
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem failure, annotated with the path involved.
struct IoError : Error {
    using Error::Error;
};

}  // namespace wavemap
