#pragma once

#include <vector>

#include "wavemap/evolver.hpp"
#include "wavemap/ode.hpp"

namespace wavemap {

/// Controls for the self-similar profile and spectrum solvers.
struct SelfSimilarOptions {
    double ode_tol = 1e-12;       // local integration tolerance
    double res_tol = 1e-8;        // acceptance bound on the profile defect
    double z_match = 0.5;         // matching point of the double shooting
    double z_ser_right = 0.05;    // series start distance from z=1 (order-12 series)
    int series_order = 12;
    double b_lo = 0.5, b_hi = 1e9;  // slope scan range at z=0
    int scan_points_per_decade = 30;
    double z_max = 50.0;          // extension of the profile past the light cone
    double taper_fraction = 0.1;  // trailing fraction of [1, z_max] blended to a constant
};

/// Regular self-similar profile chi(z), z = -r/t, on [0, z_max]:
/// chi(0) = 0, chi(1) = pi/2, with n interior crossings of pi/2.
struct SelfSimilarProfile {
    int n = 0;
    double b = 0.0;              // chi'(0), the shooting parameter
    double c = 0.0;              // chi'(1)
    double residual_norm = 0.0;  // sup of the ODE defect on [z_ser, 1 - z_ser]
    double z_ser = 0.0;          // series region size at z=0
    double z_ser_right = 0.0;    // series region size at z=1
    double z_max = 0.0;
    double taper_start = 0.0;

    SampledCurve interior;   // [z_ser, 1 - z_ser_right]
    SampledCurve exterior;   // [1 + z_ser_right, z_max], tapered to a constant
    std::vector<double> a;   // Taylor coefficients of chi - pi/2 at z=1 (a[0] = 0)
    std::vector<double> cos2chi;  // Taylor coefficients of cos(2 chi) at z=1

    double chi_at(double z) const;
    double chi_deriv_at(double z) const;
};

/// Closed form of the n=0 member: chi(z) = 2 arctan(z).
double ts_closed_form(double z);

/// Constructs the n-th regular self-similar solution by double shooting:
/// a power series leaves z=0 with slope b, an order-12 series leaves the
/// regular singular point z=1 with slope c, and (b, c) are adjusted by a
/// Newton iteration until value and derivative match at z_match.
SelfSimilarProfile solve_ab(int n, const SelfSimilarOptions& opts = {});

/// Number of strict interior crossings of pi/2 on (0,1).  Throws
/// AmbiguousCrossingError when a crossing is tangent within tolerance.
int count_crossings(const SelfSimilarProfile& profile, double tangency_tol = 1e-9);

enum class ModeClass { Gauge, Unstable, Stable };

/// One perturbation eigenvalue with its radial mode, normalized to
/// d(mode)/dz = 1 at z=0.
struct EigenvalueResult {
    double lambda = 0.0;
    ModeClass classification = ModeClass::Stable;
    SampledCurve mode;  // on [z_ser, 1 - z_ser_right]
};

struct SpectrumOptions {
    double ode_tol = 1e-11;
    double scan_step = 0.1;
    double bisect_tol = 1e-11;
    double gauge_tol = 1e-3;   // |lambda + 1| below this is tagged Gauge
    double z_match = 0.5;
    int max_halvings = 3;      // rescan refinement before giving up
};

/// All real perturbation eigenvalues in [lam_lo, lam_hi] about the given
/// profile, by matched shooting from both singular endpoints: sign scan of
/// the matching Wronskian followed by bisection.  The scan is repeated at
/// half the step until the root set is stable; if it keeps changing past
/// max_halvings the scan aborts.
std::vector<EigenvalueResult> lambda_spectrum(const SelfSimilarProfile& profile, double lam_lo,
                                              double lam_hi, int count_limit = 64,
                                              const SpectrumOptions& opts = {});

/// Matching Wronskian whose zeros are the eigenvalues; exposed for
/// diagnostics and for the match-point stability checks.
double lambda_match_determinant(const SelfSimilarProfile& profile, double lambda,
                                const SpectrumOptions& opts = {});

struct DeviationFrame {
    double t = 0.0;
    double tau = 0.0;        // ln(T* - t), after alignment
    double deviation = 0.0;  // sup |chi_run(z) - chi_profile(z)| / sup |chi_profile|
};

struct SsCompareOptions {
    double z_lo = 0.15;
    double z_hi = 0.85;
    int n_cmp = 101;
    int min_grid_points = 8;
    bool align_first_frame = true;  // fix the zero-of-time freedom on frame 1
};

/// Rescales the record's snapshots to the similarity variable z = r/(T*-t)
/// and reports the sup-norm deviation from the profile per frame.  The time
/// shift t -> t + c is fixed by minimizing the first frame's deviation only.
std::vector<DeviationFrame> ss_compare(const EvolutionRecord& record,
                                       const SelfSimilarProfile& profile, double T_star,
                                       const SsCompareOptions& opts = {});

}  // namespace wavemap
