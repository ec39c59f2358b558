#pragma once

#include <string>
#include <vector>

#include "wavemap/evolver.hpp"

namespace wavemap {

enum class Verdict { Singular, Dispersed, Ambiguous };

std::string to_string(Verdict v);

/// What the classifier saw: kept alongside the verdict so decisions can be
/// audited instead of trusted.
struct OutcomeEvidence {
    double peak_central_density = 0.0;
    double initial_central_density = 0.0;
    double growth_factor = 0.0;          // peak / initial
    bool range_exceeded_pi = false;
    double range_flag_time = 0.0;
    bool range_promoted = false;         // verdict forced Singular by the range flag
    double final_inner_energy = 0.0;
    double initial_energy = 0.0;
    double halt_time = 0.0;
    HaltReason halt = HaltReason::Completed;
    std::string note;
};

struct OutcomeLabel {
    Verdict verdict = Verdict::Ambiguous;
    OutcomeEvidence evidence;
};

/// Numeric criteria of the outcome classifier.  All overridable from the
/// run configuration and echoed into outputs.
struct ClassifierParams {
    double theta_blow = 1e6;          // blow-up: central density above theta x initial ...
    int rising_k = 10;                // ... while rising across this many samples
    double f_disp = 1e-3;             // dispersal: inner energy below f_disp x initial total ...
    double sustained_fraction = 0.10; // ... sustained over this fraction of the run
    bool promote_range_flag = true;   // chi-range > pi forces Singular
};

/// Applies the blow-up / dispersal / range criteria to a finished record.
/// Anything that meets neither trigger is Ambiguous, never silently coerced.
OutcomeLabel classify_outcome(const EvolutionRecord& record, const ClassifierParams& params = {});

/// Everything needed to run one evolution inside a search or scan.
/// t_end is the duration of each run, counted from the data's own initial
/// time (self-similar slices start at t0 < 0).
struct EvolveSetup {
    RadialGrid grid;
    ModelParams model;
    NumericsParams numerics;
    MonitorSpec monitors;
    ClassifierParams classifier;
    double t_end = 0.0;
};

struct CollapseTimeFit {
    double T_star = 0.0;
    double fit_residual = 0.0;  // rms misfit of the linearized density tail
};

/// Estimates the collapse time by fitting the central-density growth
/// d ~ (T*-t)^-2 over the last fit_samples samples (so 1/sqrt(d) is linear
/// in t and hits zero at T*).  Throws EstimationError on a non-monotone or
/// unusable tail -- dispersed records fail here by construction.
CollapseTimeFit collapse_time(const EvolutionRecord& record, int fit_samples = 10);

enum class SignTestVerdict { SignSplit, NoSplit, Indeterminate };

std::string to_string(SignTestVerdict v);

struct SignTestResult {
    SignTestVerdict verdict = SignTestVerdict::Indeterminate;
    OutcomeLabel plus;
    OutcomeLabel minus;
};

}  // namespace wavemap
