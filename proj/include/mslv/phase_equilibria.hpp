#pragma once

#include <optional>
#include <vector>

#include "mslv/eos.hpp"
#include "mslv/stability.hpp"

namespace mslv {

enum class Pair { SolidLiquid, SolidVapor, LiquidVapor };

// Two-phase coexistence point. v1 < v2 always (dense phase first).
// maxwell is NaN for pairs straddling the forbidden gap, where the
// equal-area construction has no meaning and the Gibbs condition rules.
struct EquilibriumPoint {
    double T = 0.0;
    double p = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    Pair pair = Pair::LiquidVapor;
    double res_dphi_v = 0.0;   // pressure-balance residual, reduced form
    double res_dgamma = 0.0;   // Gibbs-balance residual
    double maxwell = 0.0;      // normalized equal-area residual (fluid pairs)
    int iterations = 0;
};

struct TriplePoint {
    double T = 0.0;
    double p = 0.0;
    double v_s = 0.0;
    double v_l = 0.0;
    double v_v = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
};

enum class Terminus { CriticalPoint, TriplePoint, RangeEnd };

struct BinodalCurve {
    Pair pair = Pair::LiquidVapor;
    std::vector<EquilibriumPoint> points;
    Terminus terminus = Terminus::RangeEnd;
    std::optional<CriticalPoint> critical;  // set when terminus == CriticalPoint
    std::optional<TriplePoint> triple;      // set when terminus == TriplePoint
};

// Slope parameter of the coexistence condition,
//   h(v1, v2) = -(f(v2) - f(v1)) / (g(v2) - g(v1)),
// switching to the closed-form v2 -> v1 limit -f'(v1)/g'(v1) when
// |v2 - v1| < 1e-8 |v1|. Both volumes must lie on a branch.
double h_slope(double v1, double v2, const EosParams& P);

// Coexistence temperatures in s = sqrt(T/T_c) from h:
//   tau1 = (1+m) sqrt(a) / (sqrt(h) + m sqrt(a)),
//   tau2 = (1+m) sqrt(a) / (m sqrt(a) - sqrt(h)).
// tau1 is physical when in (0, 1 + 1/m). h < 0 is a domain error.
struct TauRoots {
    double tau1 = 0.0;
    double tau2 = 0.0;
    bool tau1_valid = false;
    bool tau2_valid = false;
};
TauRoots tau_from_h(double h, const EosParams& P);

// Solve the two coexistence conditions at fixed T by damped Newton in
// (v1, v2), iterates boxed to the branch interiors the pair dictates.
// Guesses of 0 invoke the built-in seeding (spinodal bounds + Gibbs scan).
// Converged volumes are re-identified against the isobar's roots; a
// mismatch (wrong root, wrong branch) throws BranchViolationError.
EquilibriumPoint equilibrium_at_T(double T, Pair pair, const EosParams& P,
                                  double v1_guess = 0.0, double v2_guess = 0.0);

// Normalized Maxwell residual |integral_{v1}^{v2} (p - p0) dv| / (p0 (v2 - v1))
// with p0 = p(v1, T). Fluid-branch intervals only; an interval meeting
// [d, c] throws ForbiddenRegionError. v1 == v2 gives 0.
double maxwell_residual(double v1, double v2, double T, const EosParams& P);

// Continuation along one coexistence branch from T_start toward T_end with
// adaptive step control (halve after slow Newton solves, re-double after
// three fast ones). Terminates early at the critical point (phase volumes
// merging, L-V) or at a triple point (a third phase's Gibbs energy crossing
// below), recording the terminus.
BinodalCurve trace_binodal(Pair pair, double T_start, double T_end,
                           int n_points, const EosParams& P);

// Three-phase equilibrium: 4-D Newton on the S-L and L-V conditions.
// Guesses of 0 seed from a scan near the S-V/L-V Gibbs crossing.
TriplePoint triple_point(const EosParams& P, double T_guess = 0.0,
                         double v_s_guess = 0.0, double v_l_guess = 0.0,
                         double v_v_guess = 0.0);

const char* to_string(Pair p);
const char* to_string(Terminus t);

// Branch interior a pair's dense (lo) and light (hi) volumes live in.
void pair_boxes(Pair pair, const EosParams& P, double& lo1, double& hi1,
                double& lo2, double& hi2);

}  // namespace mslv
