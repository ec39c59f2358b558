#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wavemap/classify.hpp"
#include "wavemap/initial_data.hpp"

namespace wavemap {

struct CriticalSearchResult {
    FamilySpec family;  // template; amplitude field is the scanned parameter
    double p_lo = 0.0;  // Dispersed side of the final bracket
    double p_hi = 0.0;  // Singular side
    double p_star = 0.0;
    bool converged = false;
    std::vector<std::pair<double, OutcomeLabel>> history;
};

/// Bisects the family's tuning parameter between a Dispersed p_lo and a
/// Singular p_hi until the relative bracket width reaches rel_tol or the run
/// budget is exhausted.  Ambiguous midpoints trigger one longer rerun, then
/// nearby off-midpoint probes; if the verdict stays Ambiguous the search
/// returns flagged (converged = false).
CriticalSearchResult bisect_critical(const FamilySpec& family_template, double p_lo, double p_hi,
                                     double rel_tol, int budget, const EvolveSetup& setup);

struct AttractorBase {
    enum class Kind { SelfSimilar, Static } kind = Kind::SelfSimilar;
    int n = 1;         // branch, for SelfSimilar
    double a = 1.0;    // slope parameter, for Static
    double t0 = -1.0;  // launch time for self-similar slices
};

/// Perturbs the base solution with +/- pulses and reports whether the two
/// signs split into collapse/dispersal (the intermediate-attractor test).
SignTestResult attractor_sign_test(const AttractorBase& base, const PulseParams& pulse,
                                   const EvolveSetup& setup);

struct RegimePoint {
    double eps = 0.0;
    OutcomeLabel outcome;
    std::optional<double> turnaround_time;  // outward-then-inward centroid motion
    std::string regime;                     // "disperse" | "turn-around-collapse" | "quick-collapse" | "ambiguous"
};

/// Classifies Turok-Spergel evolutions across an ascending epsilon grid and
/// detects turn-around via the energy-density centroid.  jobs > 1 fans the
/// independent evolutions out across threads.
std::vector<RegimePoint> regime_scan(const std::vector<double>& eps_grid, double Delta,
                                     const EvolveSetup& setup, int jobs = 1);

}  // namespace wavemap
