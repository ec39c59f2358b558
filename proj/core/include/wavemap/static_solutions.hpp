#pragma once

#include <vector>

#include "wavemap/classify.hpp"
#include "wavemap/ode.hpp"

namespace wavemap {

struct StaticOptions {
    double ode_tol = 1e-13;  // keeps the defect of the dense representation under res_tol
    double res_tol = 1e-8;
};

/// Static solution chi_s(r) of (r^2 chi')' = sin(2 chi) with chi_s(0) = 0,
/// parametrized by a = chi_s'(0).  Approaches pi/2 with a decaying
/// oscillation at large r; members are related by chi_a(r) = chi_1(a r).
struct StaticProfile {
    double a = 0.0;
    double r_ser = 0.0;   // series region near the origin
    double r_end = 0.0;
    double residual_norm = 0.0;
    SampledCurve curve;   // on [r_ser, r_end]

    double chi_at(double r) const;
    double chi_deriv_at(double r) const;
};

StaticProfile solve_static(double a, double R_ode = 1000.0, const StaticOptions& opts = {});

/// One perturbation mode about a static solution: omega_sq < 0 is unstable.
/// Normalized to mode(0) = 0, mode'(0) = 1.
struct StaticMode {
    double omega_sq = 0.0;
    SampledCurve mode;
};

struct OmegaOptions {
    double ode_tol = 1e-11;
    double coarse_step = 0.05;     // uniform scan step down to -0.1
    double geometric_factor = 0.75;  // refinement of the scan toward 0^-
    double bisect_tol = 1e-13;
};

/// All omega^2 roots of the shooting condition mode'(R_ode) = 0 in
/// [w2_lo, w2_hi], w2_hi < 0.  The scan grid is uniform away from zero and
/// geometric near it, since the spectrum accumulates at omega^2 -> 0^-.
/// Roots shallower than the resolvability floor -(2/R_ode)^2 cannot be
/// certified at finite R_ode and are excluded from the scan.  A sign change
/// in the outermost scan cell raises RangeAdvisoryError (widen the range).
std::vector<StaticMode> omega_spectrum(const StaticProfile& profile, double w2_lo, double w2_hi,
                                       double R_ode, const OmegaOptions& opts = {});

struct PulseParams {
    double amplitude = 0.05;
    double r0 = 10.0;
    double width = 2.0;
};

/// Evolves the static solution perturbed by +/- the given Gaussian pulse and
/// reports both outcomes.  SignSplit means the positive pulse collapses while
/// the negative one disperses.  (Defined with the search machinery; see
/// criticality.cpp.)
SignTestResult nonlinear_sign_test(double a, const PulseParams& pulse, const EvolveSetup& setup);

}  // namespace wavemap
