#include "mslv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mslv {

namespace {

double max_norm(const std::vector<double>& r) {
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x));
    return m;
}

// Gaussian elimination with partial pivoting; fine for the <= 8 unknowns
// this library ever solves for.
std::vector<double> solve_linear(std::vector<std::vector<double>> A,
                                 std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    double amax = 0.0;
    for (const auto& row : A)
        for (double x : row) amax = std::max(amax, std::abs(x));
    const double tiny = std::max(amax, 1.0) * 1e-14;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        if (std::abs(A[piv][k]) < tiny)
            throw SingularJacobianError("newton_nd: jacobian numerically singular");
        std::swap(A[k], A[piv]);
        std::swap(rhs[k], rhs[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double mult = A[i][k] / A[k][k];
            if (mult == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) A[i][j] -= mult * A[k][j];
            rhs[i] -= mult * rhs[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= A[ii][j] * x[j];
        x[ii] = s / A[ii][ii];
    }
    return x;
}

}  // namespace

double bracket_root(const std::function<double(double)>& f, double a, double b,
                    double tol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream oss;
        oss << "bracket_root: f(" << a << ") = " << fa << " and f(" << b
            << ") = " << fb << " do not bracket a root";
        throw NoBracketError(oss.str());
    }

    // Brent: b is the current best iterate, c the counterpoint.
    double c = a, fc = fa;
    double e = b - a, d = e;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b)
                            + 0.5 * tol * std::max(1.0, std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= tol) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // try secant / inverse quadratic
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1)
            b += d;
        else
            b += (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw NoConvergenceError("bracket_root: iteration budget exhausted");
}

SolveReport newton_nd(const VecFn& residual, std::vector<double> x0, double tol,
                      int max_iter, const std::vector<double>& lo,
                      const std::vector<double>& hi, const JacFn& jacobian) {
    const std::size_t n = x0.size();
    const bool boxed_lo = !lo.empty();
    const bool boxed_hi = !hi.empty();
    if ((boxed_lo && lo.size() != n) || (boxed_hi && hi.size() != n))
        throw ValidationError("newton_nd: box dimensions do not match x0");
    for (std::size_t i = 0; i < n; ++i) {
        if (boxed_lo && !(x0[i] > lo[i]))
            throw ValidationError("newton_nd: initial guess at or below lower bound");
        if (boxed_hi && !(x0[i] < hi[i]))
            throw ValidationError("newton_nd: initial guess at or above upper bound");
    }

    SolveReport rep;
    rep.x = std::move(x0);
    std::vector<double> r = residual(rep.x);
    if (r.size() != n)
        throw ValidationError("newton_nd: residual dimension does not match x0");
    rep.residual_norm = max_norm(r);

    for (rep.iterations = 0; rep.iterations < max_iter; ++rep.iterations) {
        if (rep.residual_norm <= tol) {
            rep.converged = true;
            return rep;
        }

        std::vector<std::vector<double>> J(n, std::vector<double>(n));
        if (jacobian) {
            J = jacobian(rep.x);
        } else {
            // forward differences, stepping away from a nearby bound
            for (std::size_t j = 0; j < n; ++j) {
                double h = 1e-7 * std::max(1.0, std::abs(rep.x[j]));
                if (boxed_hi && rep.x[j] + h >= hi[j]) h = -h;
                std::vector<double> xp = rep.x;
                xp[j] += h;
                const std::vector<double> rp = residual(xp);
                for (std::size_t i = 0; i < n; ++i) J[i][j] = (rp[i] - r[i]) / h;
            }
        }

        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];
        const std::vector<double> dx = solve_linear(std::move(J), std::move(rhs));

        // keep iterates strictly inside the box: shrink the whole step
        double lam_cap = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (dx[i] < 0.0 && boxed_lo && std::isfinite(lo[i]))
                lam_cap = std::min(lam_cap, 0.995 * (rep.x[i] - lo[i]) / -dx[i]);
            else if (dx[i] > 0.0 && boxed_hi && std::isfinite(hi[i]))
                lam_cap = std::min(lam_cap, 0.995 * (hi[i] - rep.x[i]) / dx[i]);
        }
        if (!(lam_cap > 0.0)) {
            rep.converged = false;
            return rep;  // pinned to the boundary, nowhere to go
        }

        // halving line search on the residual norm
        bool accepted = false;
        for (int half = 0; half <= 30; ++half) {
            const double lam = lam_cap / double(1 << half);
            std::vector<double> xt(n);
            bool inside = true;
            for (std::size_t i = 0; i < n; ++i) {
                xt[i] = rep.x[i] + lam * dx[i];
                // lam_cap leaves a margin in exact arithmetic, but a tiny
                // gap to the wall can still round onto it
                if ((boxed_lo && xt[i] <= lo[i]) || (boxed_hi && xt[i] >= hi[i]))
                    inside = false;
            }
            if (!inside) continue;
            std::vector<double> rt;
            try {
                rt = residual(xt);
            } catch (const DomainError&) {
                continue;  // stepped somewhere the model rejects; shrink
            }
            const double nt = max_norm(rt);
            if (nt < rep.residual_norm) {
                rep.x = std::move(xt);
                r = std::move(rt);
                rep.residual_norm = nt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            rep.converged = rep.residual_norm <= tol;
            return rep;  // line search stalled; caller sees converged flag
        }
    }
    rep.converged = rep.residual_norm <= tol;
    return rep;
}

namespace {

struct SimpsonCtx {
    const std::function<double(double)>& f;
    int max_depth;
};

double adapt(const SimpsonCtx& ctx, double a, double b, double fa, double fm,
             double fb, double whole, double eps, int depth, double& err_acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = ctx.f(lm);
    const double frm = ctx.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double s2 = left + right;
    const double diff = s2 - whole;
    if (std::abs(diff) <= 15.0 * eps || m == a || m == b) {
        err_acc += std::abs(diff) / 15.0;
        return s2 + diff / 15.0;  // Richardson: exact through degree 5
    }
    if (depth >= ctx.max_depth)
        throw MaxDepthError("integrate: max recursion depth exceeded (non-smooth integrand?)");
    return adapt(ctx, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1, err_acc)
         + adapt(ctx, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1, err_acc);
}

}  // namespace

IntegralResult integrate(const std::function<double(double)>& f, double a,
                         double b, double tol) {
    if (a == b) return {0.0, 0.0};
    if (a > b) {
        IntegralResult r = integrate(f, b, a, tol);
        r.value = -r.value;
        return r;
    }
    const SimpsonCtx ctx{f, 60};
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    IntegralResult out;
    out.value = adapt(ctx, a, b, fa, fm, fb, whole, tol, 0, out.error_estimate);
    return out;
}

double fd_derivative(const std::function<double(double)>& f, double x, int order,
                     double scale, bool richardson) {
    if (!(scale > 0.0)) throw ValidationError("fd_derivative: scale must be positive");
    if (order == 1) {
        const double h = scale * std::max(1.0, std::abs(x)) * 1e-6;
        auto d1 = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
        if (!richardson) return d1(h);
        return (4.0 * d1(0.5 * h) - d1(h)) / 3.0;
    }
    if (order == 2) {
        const double h = scale * std::max(1.0, std::abs(x)) * 1e-4;
        auto d2 = [&](double hh) {
            return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh);
        };
        if (!richardson) return d2(h);
        return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
    }
    throw ValidationError("fd_derivative: order must be 1 or 2");
}

}  // namespace mslv
