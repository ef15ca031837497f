#pragma once

#include "mslv/curve.hpp"
#include "mslv/eos.hpp"
#include "mslv/numerics.hpp"

namespace mslv {

// Local applicability of the model at (v, T):
//   mechanical  phi_vv < 0        (equivalently p_v < 0)
//   caloric     T phi_TT + 2 phi_T > 0   (equivalently epsilon_T > 0)
struct ApplicabilityReport {
    bool mechanical = false;
    bool caloric = false;
    double phi_vv_value = 0.0;
    double caloric_value = 0.0;
};
ApplicabilityReport applicability(double v, double T, const EosParams& P);

// Point on the mechanical stability boundary phi_vv = 0.
struct SingularPoint {
    double v = 0.0;
    double T = 0.0;
    double p = 0.0;
    Branch branch = Branch::Fluid;
};

// Closed-form roots of the spinodal condition in s = sqrt(T/T_c):
//   t1 = (m+1) sqrt(a g') / (m sqrt(a g') + sqrt(-f')),
//   t2 = (m+1) sqrt(a g') / (m sqrt(a g') - sqrt(-f')).
// t1 is the physical root when it lies in (0, 1 + 1/m); t2 accompanies it
// for completeness (negative for typical calibrations). f' >= 0 yields
// invalid flags, not an exception.
struct SpinodalRoots {
    double t1 = 0.0;
    double t2 = 0.0;
    bool t1_valid = false;
    bool t2_valid = false;
};
SpinodalRoots spinodal_sqrt_T(double v, const EosParams& P);

// Sample the spinodal T(v) = t1(v)^2 T_c over [v_min, v_max] on one branch.
// Columns: v, T, p. Volumes with no valid root are skipped; the series can
// come back empty.
CurveSeries trace_spinodal(Branch branch, double v_min, double v_max,
                           int n_points, const EosParams& P);
SingularPoint spinodal_point(double v, const EosParams& P);

// Critical point: phi_vv = phi_vvv = 0 by damped 2-D Newton. Residual
// tolerance 1e-12 in the scaled residuals (see source); the returned point
// satisfies |phi_vv|, |phi_vvv| < 1e-10. Guesses of 0 mean "one critical
// volume / temperature unit", i.e. (v_scale, T_c).
struct CriticalPoint {
    double v = 0.0;
    double T = 0.0;
    double p = 0.0;
    int iterations = 0;
};
CriticalPoint critical_point(const EosParams& P, double v_guess = 0.0,
                             double T_guess = 0.0);

}  // namespace mslv
