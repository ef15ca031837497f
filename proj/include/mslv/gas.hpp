#pragma once

#include <string>
#include <vector>

#include "mslv/errors.hpp"

namespace mslv {

// Universal gas constant, J/(mol K) == MPa cm^3/(mol K).
inline constexpr double kGasConstant = 8.314463;

// Dimensional substance record. Units: a MPa cm^6/mol^2; b, c, d, v_c
// cm^3/mol; T_c K; p_c MPa. b < d < c splits volume into the solid branch
// (b, d), the forbidden gap [d, c] and the fluid branch (c, inf).
struct GasParameters {
    std::string name;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double omega = 0.0;
    double m = 0.0;
    double n = 6.0;       // caloric degrees of freedom
    double T_c = 0.0;
    double p_c = 0.0;
    double v_c = 0.0;
    double Z = 0.0;       // critical compressibility p_c v_c / (R T_c)
    std::vector<std::string> warnings;  // non-fatal findings from validation
};

// Dimensionless counterpart: a_r = p_c a / (R T_c)^2, lengths over v_c.
struct ReducedParameters {
    std::string name;
    double a_r = 0.0;
    double b_r = 0.0;
    double c_r = 0.0;
    double d_r = 0.0;
    double m = 0.0;
    double n = 6.0;
    double Z = 0.0;
};

// Working parameter set every kernel and solver runs on. One struct, two
// instantiations: dimensional {R = kGasConstant, paper constants, T_c} and
// reduced {R = 1/Z, a = a_r/Z^2, *_r, T_c = 1}, so that the same code path
// yields p in MPa or p_r with no per-formula branching. v_scale feeds the
// absolute near-pole guard (1e-9 in reduced volume units).
struct EosParams {
    double R = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double m = 0.0;
    double T_c = 0.0;
    double n = 6.0;
    double v_scale = 1.0;

    double pole_guard() const { return 1e-9 * v_scale; }
};

// Acentric-factor correlation for the attraction slope. Low form for
// omega <= 0.491, cubic high form above; total on all real omega.
double m_from_omega(double omega);

// Invariant checks (positivity, ordering b < d < c, m and Z consistency).
// Fatal violations throw ValidationError; soft mismatches (m vs polynomial
// beyond 1e-3, Z vs p_c v_c/(R T_c) beyond 1e-9) append to gas.warnings.
void validate_gas(GasParameters& gas);

ReducedParameters reduce(const GasParameters& gas);
GasParameters dimensionalize(const ReducedParameters& red, double p_c,
                             double v_c, double T_c);

EosParams working_set_dimensional(const GasParameters& gas);
EosParams working_set_reduced(const GasParameters& gas);
EosParams working_set_reduced(const ReducedParameters& red);

// Built-in methane calibration (verbatim published constants).
GasParameters builtin_methane();

}  // namespace mslv
