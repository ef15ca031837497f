#pragma once

#include "mslv/gas.hpp"

namespace mslv {

enum class Branch { Solid, Fluid };
enum class Domain { OutOfDomain, Solid, Forbidden, Fluid };

// Total classification of a volume. Open solid interval (b, d), closed
// forbidden gap [d, c], open fluid interval (c, inf); v <= b is outside.
Domain classify_domain(double v, const EosParams& P);

// Temperature part of the attraction: q(T) = a (1 + m (1 - sqrt(T/T_c)))^2
// with its first two derivatives.
struct Attraction {
    double q = 0.0;
    double q_T = 0.0;
    double q_TT = 0.0;
};
Attraction attraction(double T, const EosParams& P);

// Repulsive kernel f(v) = R (v-d) / ((v-b)(v-c)), its volume derivative and
// antiderivative F (F' = f). F continues across the gap through ln|v-c|.
// v = d is legal (f vanishes there); v <= b and the guard bands around b and
// c are not.
struct Repulsive {
    double f = 0.0;
    double f_v = 0.0;
    double F = 0.0;
};
Repulsive repulsive_terms(double v, const EosParams& P);

// Attraction geometry g(v) = -1/(v^2 + 2bv - b^2), derivative, and
// antiderivative G > 0 (G' = g, G -> 0 as v -> inf). Defined on v > b.
struct Attractive {
    double g = 0.0;
    double g_v = 0.0;
    double G = 0.0;
};
Attractive attractive_geometry(double v, const EosParams& P);

// p(v, T) = T f(v) + q(T) g(v). Throws ForbiddenRegionError on [d, c],
// DomainError outside v > b or within the pole guard bands.
double pressure(double v, double T, const EosParams& P);

// Massieu-Planck potential phi (per R) and the partials the stability and
// equilibrium layers consume. p = R T phi_v.
struct PotentialBundle {
    double phi = 0.0;
    double phi_v = 0.0;
    double phi_vv = 0.0;
    double phi_vvv = 0.0;
    double phi_T = 0.0;
    double phi_TT = 0.0;
};
PotentialBundle potential_bundle(double v, double T, const EosParams& P);

// Full thermodynamic state at (v, T): energy epsilon, entropy sigma,
// enthalpy eta, Gibbs energy gamma = epsilon + p v - T sigma, with branch
// label and the two local applicability flags.
struct StatePoint {
    double v = 0.0;
    double T = 0.0;
    double p = 0.0;
    double epsilon = 0.0;
    double sigma = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    Branch branch = Branch::Fluid;
    bool mechanically_stable = false;
    bool calorically_stable = false;
};
StatePoint caloric_and_potentials(double v, double T, const EosParams& P);

// Gibbs energy alone (the equilibrium residuals only need gamma and p).
double gibbs_energy(double v, double T, const EosParams& P);

// State scaling between unit systems. Gauge note: p, epsilon, eta scale by
// pure products of the critical constants; sigma and gamma additionally
// carry the additive gauge R (ln v_c + (n/2) ln T_c) from the logarithms'
// units, handled here so round trips are identities.
StatePoint reduce(const StatePoint& s, const GasParameters& gas);
StatePoint dimensionalize(const StatePoint& s, const GasParameters& gas);

const char* to_string(Branch b);
const char* to_string(Domain d);

}  // namespace mslv
