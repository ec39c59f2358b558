#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wavemap/grid.hpp"

namespace wavemap {

/// First-order fields (chi, Pi = d chi/dt) sampled on a radial grid at one time.
struct FieldState {
    double t = 0.0;
    std::vector<double> chi;
    std::vector<double> pi;

    bool finite() const;
};

/// Pointwise radial energy density plus the scalar diagnostics derived from it.
struct EnergyDiagnostics {
    std::vector<double> rho;
    double total_energy = 0.0;
    double central_density = 0.0;  // max of rho/r^2 over r <= r_in
    double chi_range = 0.0;        // max chi - min chi
};

/// Time-integration controls for the iterated Crank-Nicolson scheme.
struct NumericsParams {
    double cfl = 0.25;        // dt = cfl * min grid spacing
    double iter_tol = 1e-10;  // sup-norm fixed-point tolerance
    int max_iters = 50;
    // 2 = second-order one-sided outer stencils. 1 degrades the outgoing
    // boundary to first order; used as a negative control in convergence
    // diagnostics.
    int boundary_order = 2;
};

struct BlowupTrigger {
    bool enabled = true;
    double theta = 1e6;   // halt when central density > theta * its initial value
    int rising_k = 10;    // ... while rising across this many samples
};

/// What to record during evolve(), and when to stop early.
struct MonitorSpec {
    int samples = 200;
    int snapshots = 20;
    std::vector<double> snapshot_times;  // optional explicit times (overrides `snapshots`)
    std::vector<double> probe_radii;
    double r_in_fraction = 0.25;          // inner region = r <= r_in_fraction * r_max
    double centroid_window_fraction = 0.5;
    BlowupTrigger blowup;
};

enum class HaltReason { Completed, BlowupTriggered, PoisonedState, StepDivergence };

std::string to_string(HaltReason r);

struct Snapshot {
    double t;
    std::vector<double> chi, pi, rho;
};

/// Diagnostic time series: one entry per sample time.
struct DiagnosticsSeries {
    std::vector<double> t;
    std::vector<double> energy;
    std::vector<double> inner_energy;      // energy inside r_in
    std::vector<double> central_density;   // max rho/r^2 over r <= r_in
    std::vector<double> chi_range;
    std::vector<double> centroid_radius;   // energy-density centroid over the window
    std::vector<std::vector<double>> probes;  // one row per probe radius

    std::size_t size() const { return t.size(); }
};

struct EvolutionRecord {
    std::vector<double> r;  // grid radii (copied for later rescaling analyses)
    DiagnosticsSeries series;
    std::vector<Snapshot> snapshots;
    HaltReason halt = HaltReason::Completed;
    double halt_time = 0.0;
    std::string halt_detail;
    double t_begin = 0.0;
    double t_end_requested = 0.0;
    double r_in = 0.0;
    double initial_energy = 0.0;
    double initial_central_density = 0.0;
    bool range_exceeded_pi = false;
    double range_flag_time = std::numeric_limits<double>::quiet_NaN();
};

/// Semi-discrete right-hand side of the radial wave-map system:
///   d chi/dt = Pi
///   d Pi/dt  = (1/r^2)(r^2 chi')' - m(m+1) sin(2 chi) / (2 r^2)
/// The second-derivative operator is discretized in flux form on the
/// cell-offset grid; the face at r = 0 carries zero flux, which encodes the
/// odd (chi ~ c r^m) origin behavior without an explicit ghost value.
/// One-sided stencils are used at the outer edge, before any boundary
/// condition is applied.
void rhs_eval(const FieldState& state, const RadialGrid& grid, const ModelParams& params,
              std::span<double> dchi_dt, std::span<double> dpi_dt);

/// Imposes the outgoing Sommerfeld condition  dchi/dt + chi' + chi/r = 0 at
/// r_max by overwriting Pi at the outermost point.  The inner regularity
/// condition chi(0,t) = 0 is structural (zero flux through the origin face)
/// and requires no modification here.
void apply_boundaries(FieldState& state, const RadialGrid& grid, const ModelParams& params,
                      int boundary_order = 2);

/// One iterated Crank-Nicolson step of size dt: the two-level time-centered
/// average of rhs_eval, solved by fixed-point iteration to iter_tol (sup
/// norm) or max_iters, with boundaries applied on every iterate.
FieldState step(const FieldState& state, double dt, const RadialGrid& grid,
                const ModelParams& params, const NumericsParams& numerics);

/// rho(r) = (r^2/2) [ Pi^2 + (chi')^2 + m(m+1) sin^2(chi) / r^2 ].
std::vector<double> energy_density(const FieldState& state, const RadialGrid& grid,
                                   const ModelParams& params);

/// Quadrature of the energy density over the grid (piecewise-parabolic,
/// with the analytic rho ~ r^2 closure over the innermost half cell).
double total_energy(const FieldState& state, const RadialGrid& grid, const ModelParams& params);

/// Energy integrated from the origin face up to radius r_hi.
double energy_inside(const FieldState& state, const RadialGrid& grid, const ModelParams& params,
                     double r_hi);

EnergyDiagnostics diagnostics(const FieldState& state, const RadialGrid& grid,
                              const ModelParams& params, double r_in);

/// Value at r=0 of the regular-branch interpolant c1 r^m + c2 r^(m+2) through
/// the two innermost samples; identically zero up to roundoff, by parity.
double origin_extrapolated_chi(const FieldState& state, const RadialGrid& grid, int m);

/// How far the third grid point sits off the regular branch fitted to the
/// first two: a discretization-scale regularity diagnostic.
double origin_regularity_defect(const FieldState& state, const RadialGrid& grid, int m);

/// Evolves initial data to t_end, recording diagnostics and snapshots.
/// Halts early on poisoned state, step divergence, or the blow-up trigger;
/// the halt reason is recorded rather than thrown.
EvolutionRecord evolve(const FieldState& initial, double t_end, const RadialGrid& grid,
                       const ModelParams& params, const NumericsParams& numerics,
                       const MonitorSpec& monitors);

struct ConvergenceResult {
    double order = 0.0;
    bool exact_null = false;           // errors identically zero (e.g. zero data)
    std::vector<double> errors;        // sup-norm differences between consecutive levels
    std::vector<double> spacings;
};

/// Richardson self-convergence of chi at a fixed pre-collapse time, from
/// evolutions of the same data at >= 3 resolutions in fixed ratio.
ConvergenceResult convergence_order(
    const std::function<FieldState(const RadialGrid&)>& make_data, double r_max,
    const std::vector<double>& spacings, double t_fix, const ModelParams& params,
    const NumericsParams& numerics);

}  // namespace wavemap
