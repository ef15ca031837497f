#include "mslv/phase_equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mslv/numerics.hpp"

namespace mslv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double box_margin(const EosParams& P) { return 1e-7 * P.v_scale; }

// natural pressure unit of the working set (p_c-sized in both systems)
double pressure_unit(const EosParams& P) { return P.R * P.T_c / P.v_scale; }

double phi_vv_at(double v, double T, const EosParams& P) {
    return potential_bundle(v, T, P).phi_vv;
}

// Roots of phi_vv on the fluid branch at fixed T: two below the critical
// temperature (liquid and vapor spinodal volumes), none above.
std::vector<double> fluid_spinodal_volumes(double T, const EosParams& P) {
    std::vector<double> roots;
    const double lo = P.c + 1e-6 * P.v_scale;
    const double hi = 1e5 * P.v_scale;
    const int n = 400;
    auto fn = [&](double v) { return phi_vv_at(v, T, P); };
    double v_prev = lo;
    double f_prev = fn(lo);
    for (int i = 1; i <= n; ++i) {
        const double v = lo * std::pow(hi / lo, double(i) / n);
        const double f = fn(v);
        if (f == 0.0) {
            roots.push_back(v);
        } else if ((f_prev > 0.0) != (f > 0.0)) {
            roots.push_back(bracket_root(fn, v_prev, v));
        }
        v_prev = v;
        f_prev = f;
    }
    return roots;
}

// p(v, T) = p_star solved on a monotone stretch by bracketing.
double pressure_root(double p_star, double T, const EosParams& P, double v_lo,
                     double v_hi) {
    auto fn = [&](double v) { return pressure(v, T, P) - p_star; };
    return bracket_root(fn, v_lo, v_hi);
}

double solid_root(double p_star, double T, const EosParams& P) {
    const double mg = box_margin(P);
    return pressure_root(p_star, T, P, P.b + mg, P.d - mg);
}

// liquid root: first fluid root, between c and the liquid spinodal volume
double liquid_root(double p_star, double T, const EosParams& P,
                   const std::vector<double>& spin) {
    const double mg = box_margin(P);
    const double hi = spin.size() >= 1 ? spin[0] : 1e5 * P.v_scale;
    return pressure_root(p_star, T, P, P.c + mg, hi);
}

// vapor root: last fluid root, beyond the vapor spinodal volume
double vapor_root(double p_star, double T, const EosParams& P,
                  const std::vector<double>& spin) {
    const double lo = spin.size() >= 2 ? spin[1] : P.c + box_margin(P);
    const double hi = 10.0 * std::max(P.R * T / p_star, lo);
    return pressure_root(p_star, T, P, lo, hi);
}

// Sign scan for further isobar roots in (v_lo, v_hi); used to confirm the
// converged volumes are the roots the pair names (largest/smallest).
bool another_root_in(double p_star, double T, const EosParams& P, double v_lo,
                     double v_hi, int n = 256) {
    if (!(v_hi > v_lo)) return false;
    double f_prev = pressure(v_lo, T, P) - p_star;
    if (f_prev == 0.0) return true;
    for (int i = 1; i <= n; ++i) {
        const double v = v_lo * std::pow(v_hi / v_lo, double(i) / n);
        const double f = pressure(v, T, P) - p_star;
        if (f == 0.0 || (f_prev > 0.0) != (f > 0.0)) return true;
        f_prev = f;
    }
    return false;
}

// Equality of pressures and of Gibbs energies between two volumes, scaled
// by R so the magnitudes are unit-system independent:
//   r1 = [f(v2) - f(v1) + (q/T)(g(v2) - g(v1))] / R            (= dp/(R T))
//   r2 = [dF - d(v f) + (q/T)(dG - d(v g))] / R                (= -dgamma/(R T))
std::vector<double> coexistence_residual(double v1, double v2, double T,
                                         const EosParams& P) {
    const Attraction att = attraction(T, P);
    const Repulsive r1 = repulsive_terms(v1, P);
    const Repulsive r2 = repulsive_terms(v2, P);
    const Attractive g1 = attractive_geometry(v1, P);
    const Attractive g2 = attractive_geometry(v2, P);
    const double qT = att.q / T;
    const double c1 = (r2.f - r1.f) + qT * (g2.g - g1.g);
    const double c2 = (r2.F - r1.F) - (v2 * r2.f - v1 * r1.f)
                      + qT * ((g2.G - g1.G) - (v2 * g2.g - v1 * g1.g));
    return {c1 / P.R, c2 / P.R};
}

void seed_liquid_vapor(double T, const EosParams& P, double& v1g, double& v2g) {
    const std::vector<double> spin = fluid_spinodal_volumes(T, P);
    if (spin.size() < 2)
        throw NoConvergenceError(
            "liquid-vapor seeding: no two-phase window at this temperature "
            "(at or above the critical point?)");
    const double p_hi = pressure(spin[1], T, P);
    const double p_lo = std::max(pressure(spin[0], T, P), 1e-12 * pressure_unit(P));
    if (!(p_hi > p_lo))
        throw NoConvergenceError("liquid-vapor seeding: degenerate spinodal pressures");

    auto dgamma = [&](double pg) {
        const double vl = liquid_root(pg, T, P, spin);
        const double vv = vapor_root(pg, T, P, spin);
        return gibbs_energy(vv, T, P) - gibbs_energy(vl, T, P);
    };
    // geometric scan between the spinodal pressures for the Gibbs crossing
    const int n = 64;
    double pg_prev = p_lo * std::pow(p_hi / p_lo, 1.0 / (n + 1));
    double d_prev = dgamma(pg_prev);
    for (int i = 2; i <= n; ++i) {
        const double pg = p_lo * std::pow(p_hi / p_lo, double(i) / (n + 1));
        const double d = dgamma(pg);
        if ((d_prev > 0.0) != (d > 0.0)) {
            const double pg_mid = std::sqrt(pg_prev * pg);
            v1g = liquid_root(pg_mid, T, P, spin);
            v2g = vapor_root(pg_mid, T, P, spin);
            return;
        }
        pg_prev = pg;
        d_prev = d;
    }
    throw NoConvergenceError("liquid-vapor seeding: no Gibbs crossing between the spinodal pressures");
}

void seed_solid_fluid(double T, Pair pair, const EosParams& P, double& v1g,
                      double& v2g) {
    const std::vector<double> spin = fluid_spinodal_volumes(T, P);
    const double punit = pressure_unit(P);

    if (pair == Pair::SolidVapor) {
        if (spin.size() < 2)
            throw NoConvergenceError("solid-vapor seeding: no vapor window at this temperature");
        const double p_hi = 0.999 * pressure(spin[1], T, P);
        if (!(p_hi > 0.0))
            throw NoConvergenceError("solid-vapor seeding: vapor pressure ceiling not positive");
        const double p_lo = 1e-10 * punit;
        auto dgamma = [&](double pg) {
            return gibbs_energy(vapor_root(pg, T, P, spin), T, P)
                 - gibbs_energy(solid_root(pg, T, P), T, P);
        };
        const int n = 96;
        double pg_prev = p_lo;
        double d_prev = dgamma(pg_prev);
        for (int i = 1; i <= n; ++i) {
            const double pg = p_lo * std::pow(p_hi / p_lo, double(i) / n);
            const double d = dgamma(pg);
            if ((d_prev > 0.0) != (d > 0.0)) {
                const double pg_mid = std::sqrt(pg_prev * pg);
                v1g = solid_root(pg_mid, T, P);
                v2g = vapor_root(pg_mid, T, P, spin);
                return;
            }
            pg_prev = pg;
            d_prev = d;
        }
        throw NoConvergenceError("solid-vapor seeding: no Gibbs crossing found");
    }

    // solid-liquid: linear pressure scan from just above the liquid spinodal
    // minimum (melting can sit at negative pressure below the triple point)
    const double p_floor = spin.size() >= 1
                               ? pressure(spin[0], T, P)
                               : -10.0 * punit;
    const double p_lo = p_floor + 1e-6 * punit;
    const double p_hi = 200.0 * punit;
    auto dgamma = [&](double pg) {
        return gibbs_energy(liquid_root(pg, T, P, spin), T, P)
             - gibbs_energy(solid_root(pg, T, P), T, P);
    };
    const int n = 400;
    double pg_prev = p_lo;
    double d_prev = dgamma(pg_prev);
    for (int i = 1; i <= n; ++i) {
        const double pg = p_lo + (p_hi - p_lo) * double(i) / n;
        const double d = dgamma(pg);
        if ((d_prev > 0.0) != (d > 0.0)) {
            const double pg_mid = 0.5 * (pg_prev + pg);
            v1g = solid_root(pg_mid, T, P);
            v2g = liquid_root(pg_mid, T, P, spin);
            return;
        }
        pg_prev = pg;
        d_prev = d;
    }
    throw NoConvergenceError("solid-liquid seeding: no Gibbs crossing found");
}

void default_seed(double T, Pair pair, const EosParams& P, double& v1g,
                  double& v2g) {
    if (pair == Pair::LiquidVapor)
        seed_liquid_vapor(T, P, v1g, v2g);
    else
        seed_solid_fluid(T, pair, P, v1g, v2g);
}

// Confirm the converged volumes are the isobar roots the pair names:
// mechanically stable, right branches, dense phase with no root below it,
// vapor with no root above it.
void validate_pair_roots(double v1, double v2, double T, Pair pair,
                         const EosParams& P) {
    const auto fail = [&](const char* what) {
        std::ostringstream oss;
        oss << to_string(pair) << " solve at T = " << T
            << " landed on the wrong roots: " << what << " (v1 = " << v1
            << ", v2 = " << v2 << ")";
        throw BranchViolationError(oss.str());
    };

    const Domain d1 = classify_domain(v1, P);
    const Domain d2 = classify_domain(v2, P);
    if (pair == Pair::LiquidVapor) {
        if (d1 != Domain::Fluid || d2 != Domain::Fluid)
            fail("both volumes must lie on the fluid branch");
    } else {
        if (d1 != Domain::Solid) fail("dense volume must lie on the solid branch");
        if (d2 != Domain::Fluid) fail("light volume must lie on the fluid branch");
    }

    const double p_star = pressure(v1, T, P);
    const double pv_tol = 1e-10 * P.R * P.T_c / (P.v_scale * P.v_scale);
    const Attraction att = attraction(T, P);
    auto p_v = [&](double v) {
        return T * repulsive_terms(v, P).f_v + att.q * attractive_geometry(v, P).g_v;
    };
    if (p_v(v1) > pv_tol || p_v(v2) > pv_tol)
        fail("converged to a mechanically unstable root");

    const double mg = box_margin(P);
    const double below_gap = 1.0 - 1e-4;
    const double above_gap = 1.0 + 1e-4;
    if (pair == Pair::LiquidVapor) {
        if (another_root_in(p_star, T, P, P.c + mg, v1 * below_gap))
            fail("dense volume is not the first fluid root");
        const double v_hi = 10.0 * std::max(P.R * T / std::max(p_star, 1e-14 * pressure_unit(P)), v2);
        if (another_root_in(p_star, T, P, v2 * above_gap, v_hi))
            fail("light volume is not the last fluid root");
        return;
    }

    // solid side: unique root on its branch
    if (another_root_in(p_star, T, P, P.b + mg, v1 * below_gap)
        || another_root_in(p_star, T, P, std::min(v1 * above_gap, P.d - mg), P.d - mg))
        fail("solid volume is not the solid-branch root");

    if (pair == Pair::SolidVapor) {
        const double v_hi = 10.0 * std::max(P.R * T / std::max(p_star, 1e-14 * pressure_unit(P)), v2);
        if (another_root_in(p_star, T, P, v2 * above_gap, v_hi))
            fail("light volume is not the last fluid root");
    } else {  // SolidLiquid
        if (another_root_in(p_star, T, P, P.c + mg, v2 * below_gap))
            fail("light volume is not the first fluid root");
    }
}

EquilibriumPoint solve_pair(double T, Pair pair, const EosParams& P,
                            double v1g, double v2g) {
    double lo1, hi1, lo2, hi2;
    pair_boxes(pair, P, lo1, hi1, lo2, hi2);

    auto resid = [&](const std::vector<double>& x) {
        return coexistence_residual(x[0], x[1], T, P);
    };
    const SolveReport rep =
        newton_nd(resid, {v1g, v2g}, 1e-12, 60, {lo1, lo2}, {hi1, hi2});
    if (!rep.converged) {
        std::ostringstream oss;
        oss << to_string(pair) << " solve at T = " << T
            << " did not converge (residual " << rep.residual_norm << " after "
            << rep.iterations << " iterations)";
        throw NoConvergenceError(oss.str());
    }
    double v1 = rep.x[0];
    double v2 = rep.x[1];
    if (v1 > v2) std::swap(v1, v2);
    if (!(v2 - v1 > 1e-10 * P.v_scale)) {
        std::ostringstream oss;
        oss << to_string(pair) << " solve at T = " << T
            << " collapsed to the trivial root v1 == v2 == " << v1;
        throw NoConvergenceError(oss.str());
    }
    validate_pair_roots(v1, v2, T, pair, P);

    EquilibriumPoint pt;
    pt.T = T;
    pt.pair = pair;
    pt.v1 = v1;
    pt.v2 = v2;
    pt.p = 0.5 * (pressure(v1, T, P) + pressure(v2, T, P));
    pt.res_dphi_v = potential_bundle(v2, T, P).phi_v - potential_bundle(v1, T, P).phi_v;
    pt.res_dgamma = gibbs_energy(v2, T, P) - gibbs_energy(v1, T, P);
    pt.maxwell = pair == Pair::LiquidVapor ? maxwell_residual(v1, v2, T, P) : kNaN;
    pt.iterations = rep.iterations;
    return pt;
}

// Gibbs gap of the competing third phase at a pair's equilibrium point;
// nullopt when the third phase has no root at (T, p).
std::optional<double> third_phase_gap(const EquilibriumPoint& pt,
                                      const EosParams& P) {
    try {
        double v3;
        if (pt.pair == Pair::LiquidVapor) {
            v3 = solid_root(pt.p, pt.T, P);
        } else {
            const std::vector<double> spin = fluid_spinodal_volumes(pt.T, P);
            v3 = pt.pair == Pair::SolidLiquid ? vapor_root(pt.p, pt.T, P, spin)
                                              : liquid_root(pt.p, pt.T, P, spin);
        }
        const double g_pair = 0.5 * (gibbs_energy(pt.v1, pt.T, P)
                                     + gibbs_energy(pt.v2, pt.T, P));
        return gibbs_energy(v3, pt.T, P) - g_pair;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

void pair_boxes(Pair pair, const EosParams& P, double& lo1, double& hi1,
                double& lo2, double& hi2) {
    const double mg = box_margin(P);
    if (pair == Pair::LiquidVapor) {
        lo1 = P.c + mg;
        hi1 = kInf;
    } else {
        lo1 = P.b + mg;
        hi1 = P.d - mg;
    }
    lo2 = P.c + mg;
    hi2 = kInf;
}

double h_slope(double v1, double v2, const EosParams& P) {
    const Domain d1 = classify_domain(v1, P);
    const Domain d2 = classify_domain(v2, P);
    if ((d1 != Domain::Solid && d1 != Domain::Fluid)
        || (d2 != Domain::Solid && d2 != Domain::Fluid))
        throw DomainError("h_slope: volumes must lie on a branch");

    if (std::abs(v2 - v1) < 1e-8 * std::abs(v1)) {
        // coincident-volume limit: h -> -f'(v)/g'(v)
        const Repulsive rep = repulsive_terms(v1, P);
        const Attractive geo = attractive_geometry(v1, P);
        return -rep.f_v / geo.g_v;
    }
    const Repulsive r1 = repulsive_terms(v1, P);
    const Repulsive r2 = repulsive_terms(v2, P);
    const double dg = attractive_geometry(v2, P).g - attractive_geometry(v1, P).g;
    if (dg == 0.0)
        throw DomainError("h_slope: g(v2) == g(v1); volumes alias across branches");
    return -(r2.f - r1.f) / dg;
}

TauRoots tau_from_h(double h, const EosParams& P) {
    if (h < 0.0)
        throw DomainError("tau_from_h: h must be nonnegative");
    // q(T)/T = h with q = a (1 + m (1 - tau))^2, T = tau^2 T_c
    const double sa = std::sqrt(P.a);
    const double sh = std::sqrt(h * P.T_c);
    const double s_max = 1.0 + 1.0 / P.m;
    TauRoots out;
    out.tau1 = (1.0 + P.m) * sa / (sh + P.m * sa);
    out.tau1_valid = out.tau1 > 0.0 && out.tau1 < s_max;
    const double den2 = P.m * sa - sh;
    if (den2 != 0.0) {
        out.tau2 = (1.0 + P.m) * sa / den2;
        out.tau2_valid = out.tau2 > 0.0 && out.tau2 < s_max;
    } else {
        out.tau2 = kInf;
        out.tau2_valid = false;
    }
    return out;
}

EquilibriumPoint equilibrium_at_T(double T, Pair pair, const EosParams& P,
                                  double v1_guess, double v2_guess) {
    if (!(T > 0.0)) throw DomainError("equilibrium_at_T: temperature must be positive");
    const bool user_seeded = v1_guess > 0.0 && v2_guess > 0.0;
    if (!user_seeded) default_seed(T, pair, P, v1_guess, v2_guess);
    return solve_pair(T, pair, P, v1_guess, v2_guess);
}

double maxwell_residual(double v1, double v2, double T, const EosParams& P) {
    if (v1 > v2) std::swap(v1, v2);
    if (v1 == v2) return 0.0;
    if (v1 <= P.b || v2 <= P.b)
        throw DomainError("maxwell_residual: volumes must exceed b");
    if (v1 <= P.c && v2 >= P.d) {
        std::ostringstream oss;
        oss << "maxwell_residual: [" << v1 << ", " << v2
            << "] crosses the forbidden interval; the equal-area rule only "
               "applies within one branch";
        throw ForbiddenRegionError(oss.str());
    }
    const double p0 = pressure(v1, T, P);
    auto integrand = [&](double v) { return pressure(v, T, P) - p0; };
    const IntegralResult I = integrate(integrand, v1, v2, 1e-10);
    return std::abs(I.value) / (std::abs(p0) * (v2 - v1));
}

BinodalCurve trace_binodal(Pair pair, double T_start, double T_end,
                           int n_points, const EosParams& P) {
    if (!(T_start > 0.0) || !(T_end > 0.0))
        throw DomainError("trace_binodal: temperatures must be positive");
    if (n_points < 2) n_points = 2;

    BinodalCurve bc;
    bc.pair = pair;

    const double dir = T_end >= T_start ? 1.0 : -1.0;
    std::optional<CriticalPoint> crit;
    double T_stop = T_end;
    bool crit_capped = false;
    if (pair == Pair::LiquidVapor) {
        crit = critical_point(P);
        if (dir > 0.0 && T_end >= crit->T) {
            T_stop = crit->T;
            crit_capped = true;
        }
    }

    const double base = std::abs(T_stop - T_start) / (n_points - 1);
    const double min_step = std::max(base * 1e-8, 1e-14 * P.T_c);
    const double gap_tol = 1e-6 * P.v_scale;

    EquilibriumPoint cur = equilibrium_at_T(T_start, pair, P);
    bc.points.push_back(cur);
    std::optional<double> gap_prev = third_phase_gap(cur, P);
    std::optional<EquilibriumPoint> before;  // point preceding cur

    auto extrapolate = [&](double T_next, double& v1g, double& v2g) {
        if (before) {
            const double dT = cur.T - before->T;
            const double w = dT != 0.0 ? (T_next - cur.T) / dT : 0.0;
            v1g = cur.v1 + w * (cur.v1 - before->v1);
            v2g = cur.v2 + w * (cur.v2 - before->v2);
        } else {
            v1g = cur.v1;
            v2g = cur.v2;
        }
        double lo1, hi1, lo2, hi2;
        pair_boxes(pair, P, lo1, hi1, lo2, hi2);
        const double mg2 = 2.0 * box_margin(P);
        v1g = std::clamp(v1g, lo1 + mg2, std::isfinite(hi1) ? hi1 - mg2 : kInf);
        v2g = std::clamp(v2g, lo2 + mg2, std::isfinite(hi2) ? hi2 - mg2 : kInf);
    };

    // locate a triple crossing between two traced temperatures and finish
    auto finish_at_triple = [&](double T_a, double T_b) {
        auto crossing = [&](double Tx) {
            double v1g, v2g;
            extrapolate(Tx, v1g, v2g);
            const EquilibriumPoint px = solve_pair(Tx, pair, P, v1g, v2g);
            const std::optional<double> g3 = third_phase_gap(px, P);
            return g3 ? *g3 : 0.0;
        };
        const double T_x = bracket_root(crossing, T_a, T_b, 1e-10 * P.T_c);
        double v1g, v2g;
        extrapolate(T_x, v1g, v2g);
        const EquilibriumPoint px = solve_pair(T_x, pair, P, v1g, v2g);
        if (std::abs(px.T - bc.points.back().T) > 0.0) bc.points.push_back(px);

        // assemble the three phase volumes from the pair plus the competitor
        double v_s_g = 0.0, v_l_g = 0.0, v_v_g = 0.0;
        const std::vector<double> spin = fluid_spinodal_volumes(T_x, P);
        switch (pair) {
            case Pair::LiquidVapor:
                v_l_g = px.v1; v_v_g = px.v2; v_s_g = solid_root(px.p, T_x, P);
                break;
            case Pair::SolidVapor:
                v_s_g = px.v1; v_v_g = px.v2; v_l_g = liquid_root(px.p, T_x, P, spin);
                break;
            case Pair::SolidLiquid:
                v_s_g = px.v1; v_l_g = px.v2; v_v_g = vapor_root(px.p, T_x, P, spin);
                break;
        }
        bc.triple = triple_point(P, T_x, v_s_g, v_l_g, v_v_g);
        bc.terminus = Terminus::TriplePoint;
    };

    double step = base;
    int fast_streak = 0;
    const int budget = 10 * n_points + 400;
    for (int it = 0; it < budget; ++it) {
        if (std::abs(T_stop - cur.T) <= 1e-15 * P.T_c) break;
        double T_next = cur.T + dir * step;
        if ((T_stop - T_next) * dir < 0.0) T_next = T_stop;

        double v1g, v2g;
        extrapolate(T_next, v1g, v2g);
        EquilibriumPoint pt;
        bool solved = false;
        try {
            pt = solve_pair(T_next, pair, P, v1g, v2g);
            solved = true;
        } catch (const Error&) {
            if (step * 0.5 >= min_step) {
                step *= 0.5;
                fast_streak = 0;
                continue;
            }
            if (crit_capped) break;  // let the endgame take over
            throw;
        }
        if (solved) {
            // adaptive step: shrink after hard solves, recover after easy ones
            if (pt.iterations > 10) {
                step = std::max(step * 0.5, min_step);
                fast_streak = 0;
            } else if (++fast_streak >= 3) {
                step = std::min(step * 2.0, base);
                fast_streak = 0;
            }

            const std::optional<double> gap3 = third_phase_gap(pt, P);
            if (gap_prev && gap3 && (*gap_prev > 0.0) != (*gap3 > 0.0)) {
                finish_at_triple(cur.T, pt.T);
                return bc;
            }
            before = cur;
            cur = pt;
            bc.points.push_back(cur);
            if (gap3) gap_prev = gap3;

            if (pair == Pair::LiquidVapor && cur.v2 - cur.v1 < gap_tol) {
                bc.terminus = Terminus::CriticalPoint;
                bc.critical = crit;
                return bc;
            }
        }
    }

    if (crit_capped && crit) {
        // geometric approach to the critical temperature with sqrt-scaled
        // volume guesses (the gap closes like sqrt(T_c - T))
        for (int it = 0; it < 120; ++it) {
            if (cur.v2 - cur.v1 < gap_tol) break;
            const double dT = crit->T - cur.T;
            if (dT <= 1e-15 * P.T_c) break;
            double T_next = crit->T - 0.5 * dT;
            bool stepped = false;
            for (int retry = 0; retry < 8 && !stepped; ++retry) {
                const double scale = std::sqrt((crit->T - T_next) / dT);
                const double v1g = crit->v - (crit->v - cur.v1) * scale;
                const double v2g = crit->v + (cur.v2 - crit->v) * scale;
                try {
                    const EquilibriumPoint pt = solve_pair(T_next, pair, P, v1g, v2g);
                    before = cur;
                    cur = pt;
                    bc.points.push_back(cur);
                    stepped = true;
                } catch (const Error&) {
                    T_next = 0.5 * (cur.T + T_next);  // retreat halfway
                }
            }
            if (!stepped) break;
        }
        bc.terminus = Terminus::CriticalPoint;
        bc.critical = crit;
        return bc;
    }

    bc.terminus = Terminus::RangeEnd;
    return bc;
}

TriplePoint triple_point(const EosParams& P, double T_guess, double v_s_guess,
                         double v_l_guess, double v_v_guess) {
    if (T_guess <= 0.0) T_guess = 0.5 * P.T_c;
    if (v_s_guess <= 0.0 || v_l_guess <= 0.0 || v_v_guess <= 0.0) {
        // seed all three volumes from the two-phase solves at T_guess
        const EquilibriumPoint lv = equilibrium_at_T(T_guess, Pair::LiquidVapor, P);
        const EquilibriumPoint sv = equilibrium_at_T(T_guess, Pair::SolidVapor, P);
        v_s_guess = sv.v1;
        v_l_guess = lv.v1;
        v_v_guess = 0.5 * (lv.v2 + sv.v2);
    }

    auto resid = [&](const std::vector<double>& x) {
        // x = (v_s, v_l, v_v, T); S-L and L-V conditions, four equations
        const std::vector<double> sl = coexistence_residual(x[0], x[1], x[3], P);
        const std::vector<double> lv = coexistence_residual(x[1], x[2], x[3], P);
        return std::vector<double>{sl[0], sl[1], lv[0], lv[1]};
    };
    const double mg = box_margin(P);
    const std::vector<double> lo{P.b + mg, P.c + mg, P.c + mg, 0.05 * P.T_c};
    const std::vector<double> hi{P.d - mg, kInf, kInf, 1.5 * P.T_c};

    const SolveReport rep = newton_nd(resid, {v_s_guess, v_l_guess, v_v_guess, T_guess},
                                      1e-12, 80, lo, hi);
    if (!rep.converged) {
        std::ostringstream oss;
        oss << "triple point search did not converge (residual "
            << rep.residual_norm << ")";
        throw NoConvergenceError(oss.str());
    }
    TriplePoint tp;
    tp.v_s = rep.x[0];
    tp.v_l = rep.x[1];
    tp.v_v = rep.x[2];
    tp.T = rep.x[3];
    tp.p = pressure(tp.v_l, tp.T, P);
    tp.residual_norm = rep.residual_norm;
    tp.iterations = rep.iterations;
    if (!(tp.v_s < tp.v_l && tp.v_l < tp.v_v)) {
        std::ostringstream oss;
        oss << "triple point solve violated the volume ordering v_s < v_l < v_v: ("
            << tp.v_s << ", " << tp.v_l << ", " << tp.v_v << ")";
        throw BranchViolationError(oss.str());
    }
    return tp;
}

const char* to_string(Pair p) {
    switch (p) {
        case Pair::SolidLiquid: return "solid-liquid";
        case Pair::SolidVapor: return "solid-vapor";
        case Pair::LiquidVapor: return "liquid-vapor";
    }
    return "?";
}

const char* to_string(Terminus t) {
    switch (t) {
        case Terminus::CriticalPoint: return "critical-point";
        case Terminus::TriplePoint: return "triple-point";
        case Terminus::RangeEnd: return "range-end";
    }
    return "?";
}

}  // namespace mslv
