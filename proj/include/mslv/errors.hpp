#pragma once

#include <stdexcept>
#include <string>

namespace mslv {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of an operation (v <= b, T <= 0,
// inside a guard band around a pole, h < 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Volume inside the forbidden gap [d, c] where the model has no state.
struct ForbiddenRegionError : DomainError {
    using DomainError::DomainError;
};

// Parameter set or data record violating a documented invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Malformed gas file; carries line/key context in the message.
struct ParseError : Error {
    using Error::Error;
};

// Iterative solver exhausted its budget without meeting tolerance.
struct NoConvergenceError : Error {
    using Error::Error;
};

// bracket_root called with f(a), f(b) of the same sign.
struct NoBracketError : NoConvergenceError {
    using NoConvergenceError::NoConvergenceError;
};

// Newton hit a numerically singular Jacobian.
struct SingularJacobianError : NoConvergenceError {
    using NoConvergenceError::NoConvergenceError;
};

// Adaptive quadrature exceeded its recursion depth (integrand too wild).
struct MaxDepthError : NoConvergenceError {
    using NoConvergenceError::NoConvergenceError;
};

// Equilibrium iterate or solution left the branch it was asked to stay on.
struct BranchViolationError : Error {
    using Error::Error;
};

// Filesystem trouble (missing file, unwritable output).
struct IoError : Error {
    using Error::Error;
};

}  // namespace mslv
