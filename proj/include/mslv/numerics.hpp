#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mslv/errors.hpp"

namespace mslv {

// Outcome of an iterative solve. `x` is the final iterate whether or not
// the solve converged; callers must check `converged` before trusting it.
struct SolveReport {
    std::vector<double> x;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Root of f on [a, b] by Brent's method (bisection / secant / inverse
// quadratic). Requires f(a) and f(b) of opposite sign, else NoBracketError.
// An exact zero at an endpoint is returned immediately. Stops when
// |f(x)| <= tol or the bracket width shrinks below tol*max(1, |x|).
// Iterates never leave [a, b].
double bracket_root(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12);

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;
using JacFn = std::function<std::vector<std::vector<double>>(const std::vector<double>&)>;

// Damped Newton for residual(x) = 0 in <= 8 dimensions.
// - jacobian == nullptr: forward-difference Jacobian, column step
//   1e-7 * max(1, |x_j|).
// - Line search halves the step (max 30 times) until the residual norm
//   decreases; candidate steps are clipped so iterates stay strictly inside
//   [lo, hi] when bounds are given.
// - x0 outside the box is a precondition violation (ValidationError).
// - Convergence: residual max-norm <= tol.
// Non-convergence (budget exhausted, line search stalled) is reported via
// the converged flag, not an exception; SingularJacobianError and
// ValidationError do throw.
SolveReport newton_nd(const VecFn& residual, std::vector<double> x0,
                      double tol = 1e-12, int max_iter = 100,
                      const std::vector<double>& lo = {},
                      const std::vector<double>& hi = {},
                      const JacFn& jacobian = nullptr);

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Adaptive Simpson with Richardson extrapolation (exact through degree-5
// polynomials). Deterministic subdivision order; reversed limits negate.
// Target: error_estimate <= tol * max(1, |value|). Throws MaxDepthError when
// the recursion exceeds its depth cap without meeting tolerance.
IntegralResult integrate(const std::function<double(double)>& f, double a,
                         double b, double tol = 1e-10);

// Central finite difference of order 1 or 2.
// Step: scale * max(1, |x|) * 1e-6 (order 1) or * 1e-4 (order 2).
// richardson=true combines h and h/2 for two extra orders of accuracy.
double fd_derivative(const std::function<double(double)>& f, double x,
                     int order = 1, double scale = 1.0,
                     bool richardson = false);

}  // namespace mslv
