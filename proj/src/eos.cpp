#include "mslv/eos.hpp"

#include <cmath>
#include <sstream>

namespace mslv {

namespace {

[[noreturn]] void domain_fail(const char* what, double v) {
    std::ostringstream oss;
    oss << what << " (v = " << v << ")";
    throw DomainError(oss.str());
}

// Shared gate for state-level evaluations: v must sit on a branch, outside
// the guard bands around the poles/discontinuities at b, d, c.
void check_state_domain(double v, double T, const EosParams& P) {
    if (!(T > 0.0)) throw DomainError("temperature must be positive");
    const double gd = P.pole_guard();
    if (!(v > P.b + gd)) {
        if (!(v > P.b)) domain_fail("volume at or below the covolume b", v);
        domain_fail("volume inside the guard band of b", v);
    }
    if (v >= P.d - gd && v <= P.c + gd) {
        if (v >= P.d && v <= P.c) {
            std::ostringstream oss;
            oss << "volume " << v << " inside the forbidden interval [" << P.d
                << ", " << P.c << "]";
            throw ForbiddenRegionError(oss.str());
        }
        domain_fail("volume inside the guard band of the forbidden interval", v);
    }
}

// second volume derivatives of the kernels (internal use)
double f_vv(double v, const EosParams& P) {
    const double A = (P.b - P.d) / (P.b - P.c);
    const double B = (P.d - P.c) / (P.b - P.c);
    const double vb = v - P.b;
    const double vc = v - P.c;
    return 2.0 * P.R * (A / (vb * vb * vb) + B / (vc * vc * vc));
}

double g_vv(double v, const EosParams& P) {
    const double w = v + P.b;
    const double D = v * v + 2.0 * P.b * v - P.b * P.b;
    return -2.0 * (3.0 * w * w + 2.0 * P.b * P.b) / (D * D * D);
}

}  // namespace

Domain classify_domain(double v, const EosParams& P) {
    if (!(v > P.b)) return Domain::OutOfDomain;
    if (v < P.d) return Domain::Solid;
    if (v <= P.c) return Domain::Forbidden;
    return Domain::Fluid;
}

Attraction attraction(double T, const EosParams& P) {
    if (!(T > 0.0)) throw DomainError("temperature must be positive");
    const double s = std::sqrt(T / P.T_c);
    const double w = 1.0 + P.m * (1.0 - s);
    Attraction A;
    A.q = P.a * w * w;
    A.q_T = -P.a * P.m * w / std::sqrt(T * P.T_c);
    A.q_TT = P.a * P.m * (P.m + 1.0) / (2.0 * T * std::sqrt(T * P.T_c));
    return A;
}

Repulsive repulsive_terms(double v, const EosParams& P) {
    const double gd = P.pole_guard();
    if (!(v > P.b + gd)) {
        if (!(v > P.b)) domain_fail("volume at or below the covolume b", v);
        domain_fail("volume inside the guard band of b", v);
    }
    if (std::abs(v - P.c) < gd) domain_fail("volume inside the guard band of c", v);

    // partial fractions: f = R (A/(v-b) + B/(v-c)), A + B = 1
    const double A = (P.b - P.d) / (P.b - P.c);
    const double B = (P.d - P.c) / (P.b - P.c);
    const double vb = v - P.b;
    const double vc = v - P.c;
    Repulsive r;
    r.f = P.R * (v - P.d) / (vb * vc);
    r.f_v = -P.R * (A / (vb * vb) + B / (vc * vc));
    // |.| continues the antiderivative onto the solid branch where v < c
    r.F = P.R * (A * std::log(vb) + B * std::log(std::abs(vc)));
    return r;
}

Attractive attractive_geometry(double v, const EosParams& P) {
    const double gd = P.pole_guard();
    if (!(v > P.b + gd)) {
        if (!(v > P.b)) domain_fail("volume at or below the covolume b", v);
        domain_fail("volume inside the guard band of b", v);
    }
    const double D = v * v + 2.0 * P.b * v - P.b * P.b;
    const double s2b = std::sqrt(2.0) * P.b;
    Attractive g;
    g.g = -1.0 / D;
    g.g_v = 2.0 * (v + P.b) / (D * D);
    g.G = std::log((v + P.b + s2b) / (v + P.b - s2b)) / (2.0 * s2b);
    return g;
}

double pressure(double v, double T, const EosParams& P) {
    check_state_domain(v, T, P);
    return T * repulsive_terms(v, P).f + attraction(T, P).q * attractive_geometry(v, P).g;
}

PotentialBundle potential_bundle(double v, double T, const EosParams& P) {
    check_state_domain(v, T, P);
    const Attraction att = attraction(T, P);
    const Repulsive rep = repulsive_terms(v, P);
    const Attractive geo = attractive_geometry(v, P);
    const double qRT = att.q / (P.R * T);

    PotentialBundle pb;
    pb.phi = rep.F / P.R + qRT * geo.G + 0.5 * P.n * std::log(T);
    pb.phi_v = rep.f / P.R + qRT * geo.g;
    pb.phi_vv = rep.f_v / P.R + qRT * geo.g_v;
    pb.phi_vvv = f_vv(v, P) / P.R + qRT * g_vv(v, P);
    const double num = att.q_T * T - att.q;
    pb.phi_T = num / (P.R * T * T) * geo.G + 0.5 * P.n / T;
    pb.phi_TT = (att.q_TT / T - 2.0 * num / (T * T * T)) * geo.G / P.R
                - 0.5 * P.n / (T * T);
    return pb;
}

StatePoint caloric_and_potentials(double v, double T, const EosParams& P) {
    check_state_domain(v, T, P);
    const Attraction att = attraction(T, P);
    const Repulsive rep = repulsive_terms(v, P);
    const Attractive geo = attractive_geometry(v, P);

    StatePoint s;
    s.v = v;
    s.T = T;
    s.p = T * rep.f + att.q * geo.g;
    s.epsilon = (T * att.q_T - att.q) * geo.G + 0.5 * P.n * P.R * T;
    s.sigma = rep.F + att.q_T * geo.G + 0.5 * P.n * P.R * (std::log(T) + 1.0);
    s.eta = s.epsilon + s.p * v;
    s.gamma = s.epsilon + s.p * v - T * s.sigma;
    s.branch = v < P.d ? Branch::Solid : Branch::Fluid;
    s.mechanically_stable = rep.f_v / P.R + att.q / (P.R * T) * geo.g_v < 0.0;
    s.calorically_stable = att.q_TT * geo.G / P.R + 0.5 * P.n / T > 0.0;
    return s;
}

double gibbs_energy(double v, double T, const EosParams& P) {
    check_state_domain(v, T, P);
    const Attraction att = attraction(T, P);
    const Repulsive rep = repulsive_terms(v, P);
    const Attractive geo = attractive_geometry(v, P);
    const double p = T * rep.f + att.q * geo.g;
    // gamma = p v - T F - q G - (n/2) R T ln T  (== epsilon + p v - T sigma)
    return p * v - T * rep.F - att.q * geo.G - 0.5 * P.n * P.R * T * std::log(T);
}

namespace {

// Additive gauge the logarithms pick up when volume and temperature change
// units: sigma_dim = (p_c v_c / T_c) sigma_r + R (ln v_c + (n/2) ln T_c),
// gamma_dim = p_c v_c gamma_r - R T_dim (ln v_c + (n/2) ln T_c).
double log_gauge(const GasParameters& gas) {
    return kGasConstant * (std::log(gas.v_c) + 0.5 * gas.n * std::log(gas.T_c));
}

}  // namespace

StatePoint reduce(const StatePoint& s, const GasParameters& gas) {
    const double pv = gas.p_c * gas.v_c;
    StatePoint r = s;
    r.v = s.v / gas.v_c;
    r.T = s.T / gas.T_c;
    r.p = s.p / gas.p_c;
    r.epsilon = s.epsilon / pv;
    r.eta = s.eta / pv;
    r.sigma = (s.sigma - log_gauge(gas)) * gas.T_c / pv;
    r.gamma = (s.gamma + s.T * log_gauge(gas)) / pv;
    return r;
}

StatePoint dimensionalize(const StatePoint& s, const GasParameters& gas) {
    const double pv = gas.p_c * gas.v_c;
    StatePoint d = s;
    d.v = s.v * gas.v_c;
    d.T = s.T * gas.T_c;
    d.p = s.p * gas.p_c;
    d.epsilon = s.epsilon * pv;
    d.eta = s.eta * pv;
    d.sigma = s.sigma * pv / gas.T_c + log_gauge(gas);
    d.gamma = s.gamma * pv - d.T * log_gauge(gas);
    return d;
}

const char* to_string(Branch b) {
    return b == Branch::Solid ? "solid" : "fluid";
}

const char* to_string(Domain d) {
    switch (d) {
        case Domain::OutOfDomain: return "out-of-domain";
        case Domain::Solid: return "solid";
        case Domain::Forbidden: return "forbidden";
        case Domain::Fluid: return "fluid";
    }
    return "?";
}

}  // namespace mslv
