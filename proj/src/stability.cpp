#include "mslv/stability.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace mslv {

ApplicabilityReport applicability(double v, double T, const EosParams& P) {
    const PotentialBundle pb = potential_bundle(v, T, P);
    ApplicabilityReport r;
    r.phi_vv_value = pb.phi_vv;
    r.caloric_value = T * pb.phi_TT + 2.0 * pb.phi_T;
    r.mechanical = r.phi_vv_value < 0.0;
    r.caloric = r.caloric_value > 0.0;
#ifndef NDEBUG
    // the equivalent sign tests on p_v and epsilon_T must agree
    {
        const Attraction att = attraction(T, P);
        const Repulsive rep = repulsive_terms(v, P);
        const Attractive geo = attractive_geometry(v, P);
        const double p_v = T * rep.f_v + att.q * geo.g_v;
        const double eps_T = att.q_TT * T * geo.G + 0.5 * P.n * P.R;
        assert((p_v < 0.0) == r.mechanical);
        assert((eps_T > 0.0) == r.caloric);
    }
#endif
    return r;
}

SpinodalRoots spinodal_sqrt_T(double v, const EosParams& P) {
    const Repulsive rep = repulsive_terms(v, P);
    const Attractive geo = attractive_geometry(v, P);
    SpinodalRoots out;
    if (!(rep.f_v < 0.0)) return out;  // no real root of the spinodal condition

    // phi_vv = 0 with q(T) = a (1+m(1-s))^2, s = sqrt(T/T_c), solved for s:
    //   s sqrt(-T_c f') = +- sqrt(a g') (1 + m - m s)
    const double sag = std::sqrt(P.a * geo.g_v);
    const double sf = std::sqrt(-P.T_c * rep.f_v);
    const double s_max = 1.0 + 1.0 / P.m;  // where q hits zero
    out.t1 = (P.m + 1.0) * sag / (P.m * sag + sf);
    out.t1_valid = out.t1 > 0.0 && out.t1 < s_max;
    const double den2 = P.m * sag - sf;
    if (den2 != 0.0) {
        out.t2 = (P.m + 1.0) * sag / den2;
        out.t2_valid = out.t2 > 0.0 && out.t2 < s_max;
    } else {
        out.t2 = std::numeric_limits<double>::infinity();
        out.t2_valid = false;
    }
    return out;
}

SingularPoint spinodal_point(double v, const EosParams& P) {
    const SpinodalRoots r = spinodal_sqrt_T(v, P);
    if (!r.t1_valid)
        throw DomainError("no physical spinodal root at this volume");
    SingularPoint s;
    s.v = v;
    s.T = r.t1 * r.t1 * P.T_c;
    s.p = pressure(v, s.T, P);
    s.branch = v < P.d ? Branch::Solid : Branch::Fluid;
    return s;
}

CurveSeries trace_spinodal(Branch branch, double v_min, double v_max,
                           int n_points, const EosParams& P) {
    CurveSeries cs;
    cs.name = "spinodal";
    cs.columns = {{"v", ""}, {"T", ""}, {"p", ""}};
    cs.metadata["branch"] = to_string(branch);
    if (n_points < 2 || !(v_max > v_min)) return cs;

    // clip the request to the branch interior (guarded)
    const double margin = 1e-6 * P.v_scale;
    double lo, hi;
    if (branch == Branch::Solid) {
        lo = P.b + margin;
        hi = P.d - margin;
    } else {
        lo = P.c + margin;
        hi = std::numeric_limits<double>::infinity();
    }
    v_min = std::max(v_min, lo);
    v_max = std::min(v_max, hi);
    if (!(v_max > v_min)) return cs;

    // solid span is narrow: linear sampling; fluid spans decades: log
    const bool log_grid = branch == Branch::Fluid;
    const double x0 = log_grid ? std::log(v_min) : v_min;
    const double x1 = log_grid ? std::log(v_max) : v_max;
    for (int i = 0; i < n_points; ++i) {
        const double x = x0 + (x1 - x0) * double(i) / double(n_points - 1);
        // pin the ends so exp(log(v)) rounding cannot leave the span
        const double v = i == 0            ? v_min
                         : i == n_points - 1 ? v_max
                                             : (log_grid ? std::exp(x) : x);
        const SpinodalRoots r = spinodal_sqrt_T(v, P);
        if (!r.t1_valid) continue;
        const double T = r.t1 * r.t1 * P.T_c;
        cs.add_row({v, T, pressure(v, T, P)});
    }
    return cs;
}

CriticalPoint critical_point(const EosParams& P, double v_guess, double T_guess) {
    if (v_guess <= 0.0) v_guess = P.v_scale;
    if (T_guess <= 0.0) T_guess = P.T_c;

    // v_scale powers make the residual magnitudes unit-independent
    const double s2 = P.v_scale * P.v_scale;
    const double s3 = s2 * P.v_scale;
    auto resid = [&P, s2, s3](const std::vector<double>& x) {
        const PotentialBundle pb = potential_bundle(x[0], x[1], P);
        return std::vector<double>{pb.phi_vv * s2, pb.phi_vvv * s3};
    };
    const std::vector<double> lo{P.c + 1e-6 * P.v_scale, 1e-6 * P.T_c};
    const std::vector<double> hi{1e6 * P.v_scale, 1e3 * P.T_c};

    const SolveReport rep = newton_nd(resid, {v_guess, T_guess}, 1e-12, 80, lo, hi);
    if (!rep.converged) {
        std::ostringstream oss;
        oss << "critical point search did not converge (residual "
            << rep.residual_norm << " after " << rep.iterations << " iterations)";
        throw NoConvergenceError(oss.str());
    }
    CriticalPoint cp;
    cp.v = rep.x[0];
    cp.T = rep.x[1];
    cp.p = pressure(cp.v, cp.T, P);
    cp.iterations = rep.iterations;
    return cp;
}

}  // namespace mslv
