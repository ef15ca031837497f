#include "mslv/gas.hpp"

#include <cmath>
#include <sstream>

namespace mslv {

double m_from_omega(double omega) {
    if (omega <= 0.491)
        return 0.37464 + omega * (1.54226 - 0.26992 * omega);
    return 0.374642 + omega * (1.48504 + omega * (-0.164423 + 0.016666 * omega));
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

void validate_gas(GasParameters& gas) {
    const std::string tag = gas.name.empty() ? "gas" : "gas '" + gas.name + "'";
    require(gas.a > 0.0, tag + ": a must be positive");
    require(gas.b > 0.0, tag + ": b must be positive");
    require(gas.b < gas.d && gas.d < gas.c,
            tag + ": covolume ordering violated, require 0 < b < d < c");
    require(gas.m > 0.0, tag + ": m must be positive");
    require(gas.n > 0.0, tag + ": n must be positive");
    require(gas.T_c > 0.0, tag + ": T_c must be positive");
    require(gas.p_c > 0.0, tag + ": p_c must be positive");
    require(gas.v_c > 0.0, tag + ": v_c must be positive");
    require(gas.Z > 0.0, tag + ": Z must be positive");
    require(gas.v_c > gas.c, tag + ": v_c must exceed the fluid covolume c");

    const double m_poly = m_from_omega(gas.omega);
    if (std::abs(gas.m - m_poly) > 1e-3) {
        std::ostringstream oss;
        oss << tag << ": m = " << gas.m << " differs from the acentric correlation "
            << m_poly << " by more than 1e-3; keeping the explicit value";
        gas.warnings.push_back(oss.str());
    }

    const double z_derived = gas.p_c * gas.v_c / (kGasConstant * gas.T_c);
    const double z_rel = std::abs(gas.Z - z_derived) / z_derived;
    if (z_rel > 5e-3) {
        std::ostringstream oss;
        oss << tag << ": Z = " << gas.Z << " inconsistent with p_c v_c/(R T_c) = "
            << z_derived;
        throw ValidationError(oss.str());
    }
    if (z_rel > 1e-9) {
        std::ostringstream oss;
        oss << tag << ": Z = " << gas.Z << " differs from p_c v_c/(R T_c) = "
            << z_derived << " (rel " << z_rel << "); keeping the explicit value";
        gas.warnings.push_back(oss.str());
    }
}

ReducedParameters reduce(const GasParameters& gas) {
    ReducedParameters r;
    r.name = gas.name;
    const double rt = kGasConstant * gas.T_c;
    r.a_r = gas.p_c * gas.a / (rt * rt);
    r.b_r = gas.b / gas.v_c;
    r.c_r = gas.c / gas.v_c;
    r.d_r = gas.d / gas.v_c;
    r.m = gas.m;
    r.n = gas.n;
    r.Z = gas.Z;
    return r;
}

GasParameters dimensionalize(const ReducedParameters& red, double p_c,
                             double v_c, double T_c) {
    GasParameters g;
    g.name = red.name;
    const double rt = kGasConstant * T_c;
    g.a = red.a_r * rt * rt / p_c;
    g.b = red.b_r * v_c;
    g.c = red.c_r * v_c;
    g.d = red.d_r * v_c;
    g.m = red.m;
    g.n = red.n;
    g.Z = red.Z;
    g.T_c = T_c;
    g.p_c = p_c;
    g.v_c = v_c;
    // omega is not stored in reduced form; invert the low branch of the
    // correlation so m round-trips (omega itself is only used through m)
    const double disc = 1.54226 * 1.54226 - 4.0 * 0.26992 * (g.m - 0.37464);
    g.omega = disc >= 0.0
                  ? (1.54226 - std::sqrt(disc)) / (2.0 * 0.26992)
                  : 0.0;
    return g;
}

EosParams working_set_dimensional(const GasParameters& gas) {
    EosParams P;
    P.R = kGasConstant;
    P.a = gas.a;
    P.b = gas.b;
    P.c = gas.c;
    P.d = gas.d;
    P.m = gas.m;
    P.T_c = gas.T_c;
    P.n = gas.n;
    P.v_scale = gas.v_c;
    return P;
}

EosParams working_set_reduced(const ReducedParameters& red) {
    // R -> 1/Z and a -> a_r/Z^2 make p = T f + q g reproduce the
    // dimensionless isotherm exactly, with T_c = 1 and volumes over v_c.
    EosParams P;
    P.R = 1.0 / red.Z;
    P.a = red.a_r / (red.Z * red.Z);
    P.b = red.b_r;
    P.c = red.c_r;
    P.d = red.d_r;
    P.m = red.m;
    P.T_c = 1.0;
    P.n = red.n;
    P.v_scale = 1.0;
    return P;
}

EosParams working_set_reduced(const GasParameters& gas) {
    return working_set_reduced(reduce(gas));
}

GasParameters builtin_methane() {
    GasParameters g;
    g.name = "methane";
    g.T_c = 190.56;   // K
    g.p_c = 4.5992;   // MPa
    g.v_c = 98.63;    // cm^3/mol
    g.omega = 0.011;
    g.m = 0.391;      // published alongside omega; the correlation gives 0.39157
    g.n = 6.0;
    g.Z = 0.286;      // published rounding; p_c v_c/(R T_c) = 0.28630

    // published reduced covolumes; dimensional values derived from them
    const double a_r = 0.4902264;
    const double b_r = 0.2989634;
    const double d_r = 0.3603434;  // solid branch upper end
    const double c_r = 0.3604034;  // fluid branch lower end
    const double rt = kGasConstant * g.T_c;
    g.a = a_r * rt * rt / g.p_c;
    g.b = b_r * g.v_c;
    g.d = d_r * g.v_c;
    g.c = c_r * g.v_c;

    validate_gas(g);
    g.warnings.clear();  // known roundings in the published calibration
    return g;
}

}  // namespace mslv
