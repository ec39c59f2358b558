#include "wavemap/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Singular: return "singular";
        case Verdict::Dispersed: return "dispersed";
        case Verdict::Ambiguous: return "ambiguous";
    }
    return "unknown";
}

std::string to_string(SignTestVerdict v) {
    switch (v) {
        case SignTestVerdict::SignSplit: return "sign-split";
        case SignTestVerdict::NoSplit: return "no-split";
        case SignTestVerdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

OutcomeLabel classify_outcome(const EvolutionRecord& record, const ClassifierParams& params) {
    if (record.series.size() == 0)
        throw InsufficientDataError("classify_outcome: record has no diagnostics");

    OutcomeLabel label;
    OutcomeEvidence& ev = label.evidence;
    const auto& cd = record.series.central_density;
    ev.initial_central_density = cd.front();
    ev.peak_central_density = *std::max_element(cd.begin(), cd.end());
    ev.growth_factor =
        ev.initial_central_density > 0.0 ? ev.peak_central_density / ev.initial_central_density
                                         : 0.0;
    ev.range_exceeded_pi = record.range_exceeded_pi;
    ev.range_flag_time = record.range_flag_time;
    ev.final_inner_energy = record.series.inner_energy.back();
    ev.initial_energy = record.initial_energy;
    ev.halt = record.halt;
    ev.halt_time = record.halt_time;

    // Blow-up: the trigger that halted the run, or the same criterion met in
    // the recorded series.
    bool singular = false;
    if (record.halt == HaltReason::BlowupTriggered) {
        singular = true;
        ev.note = "blow-up trigger";
    } else if (ev.initial_central_density > 0.0) {
        const std::size_t k = static_cast<std::size_t>(params.rising_k);
        if (cd.size() >= k + 1) {
            bool rising = cd.back() > params.theta_blow * ev.initial_central_density;
            for (std::size_t i = cd.size() - k; rising && i < cd.size(); ++i)
                if (cd[i] <= cd[i - 1]) rising = false;
            if (rising) {
                singular = true;
                ev.note = "density growth criterion";
            }
        }
    }
    // Step divergence with the density on the rise counts as blow-up: the
    // iteration failure is how collapse manifests on a fixed grid.
    if (!singular && record.halt == HaltReason::StepDivergence && cd.size() >= 3 &&
        cd[cd.size() - 1] > cd[cd.size() - 2] && cd[cd.size() - 2] > cd[cd.size() - 3] &&
        ev.growth_factor > 10.0) {
        singular = true;
        ev.note = "step divergence with rising density";
    }

    if (singular) {
        label.verdict = Verdict::Singular;
        return label;
    }

    // The range-of-chi signal: degree can hide above range pi, and empirically
    // such runs always collapse later.  Promotion is a config switch.
    if (record.range_exceeded_pi && params.promote_range_flag) {
        label.verdict = Verdict::Singular;
        ev.range_promoted = true;
        ev.note = "promoted by chi-range > pi";
        return label;
    }

    // Dispersal: inner energy below f_disp x initial total, with chi range
    // under pi, sustained over the trailing window.
    if (record.halt == HaltReason::Completed) {
        const auto& t = record.series.t;
        const auto& ein = record.series.inner_energy;
        const auto& rng = record.series.chi_range;
        const double span = t.back() - t.front();
        const double window = params.sustained_fraction * span;
        const double threshold = params.f_disp * record.initial_energy;
        bool sustained = true;
        bool any = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t.back() - t[i] > window) continue;
            any = true;
            if (ein[i] > threshold || rng[i] >= kPi) {
                sustained = false;
                break;
            }
        }
        if (any && sustained) {
            label.verdict = Verdict::Dispersed;
            ev.note = "inner energy drained";
            return label;
        }
    }

    label.verdict = Verdict::Ambiguous;
    if (record.halt == HaltReason::PoisonedState) ev.note = "poisoned state without rising density";
    else if (ev.note.empty()) ev.note = "no trigger met";
    return label;
}

CollapseTimeFit collapse_time(const EvolutionRecord& record, int fit_samples) {
    const auto& t = record.series.t;
    const auto& cd = record.series.central_density;
    const std::size_t k = static_cast<std::size_t>(std::max(fit_samples, 3));
    if (t.size() < k) throw EstimationError("collapse_time: too few samples in the record");

    // Precondition: the record must look singular -- the density maximum
    // sits at the end of the record and the tail rises monotonically.
    const double peak = *std::max_element(cd.begin(), cd.end());
    if (!(cd.back() >= 0.999 * peak))
        throw EstimationError("collapse_time: record does not end at its density peak");

    const std::size_t i0 = t.size() - k;
    for (std::size_t i = i0 + 1; i < t.size(); ++i)
        if (cd[i] <= cd[i - 1] || cd[i] <= 0.0)
            throw EstimationError("collapse_time: density tail is not monotonically rising");

    // d ~ C (T*-t)^-2  =>  y = d^(-1/2) is linear in t and vanishes at T*.
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(k);
    for (std::size_t i = i0; i < t.size(); ++i) {
        const double y = 1.0 / std::sqrt(cd[i]);
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
    }
    const double beta = (n * sty - st * sy) / (n * stt - st * st);
    const double alpha = (sy - beta * st) / n;
    if (!(beta < 0.0)) throw EstimationError("collapse_time: density tail not steepening");
    CollapseTimeFit fit;
    fit.T_star = -alpha / beta;
    // On a fixed grid the regularized evolution can outlive the continuum
    // blow-up, so T* may precede the very last samples; it must still lie
    // beyond the start of the fit window.
    if (fit.T_star <= t[i0])
        throw EstimationError("collapse_time: extrapolated T* precedes the fit window");
    double rss = 0.0, scale = 0.0;
    for (std::size_t i = i0; i < t.size(); ++i) {
        const double y = 1.0 / std::sqrt(cd[i]);
        const double f = alpha + beta * t[i];
        rss += (y - f) * (y - f);
        scale = std::max(scale, std::abs(y));
    }
    fit.fit_residual = std::sqrt(rss / n) / (scale > 0.0 ? scale : 1.0);
    return fit;
}

namespace {

FamilySpec with_parameter(FamilySpec spec, double p) {
    spec.amplitude = p;
    return spec;
}

OutcomeLabel run_member(const FamilySpec& spec, const EvolveSetup& setup, double t_end_override) {
    const FieldState init = make_initial_data(spec, setup.grid);
    const double duration = (t_end_override > 0.0) ? t_end_override : setup.t_end;
    const EvolutionRecord rec =
        evolve(init, init.t + duration, setup.grid, setup.model, setup.numerics, setup.monitors);
    return classify_outcome(rec, setup.classifier);
}

}  // namespace

CriticalSearchResult bisect_critical(const FamilySpec& family_template, double p_lo, double p_hi,
                                     double rel_tol, int budget, const EvolveSetup& setup) {
    if (!(p_lo < p_hi)) throw BracketError("bisect_critical: need p_lo < p_hi");
    if (p_lo == p_hi || budget < 3)
        throw BracketError("bisect_critical: degenerate bracket or budget");

    CriticalSearchResult res;
    res.family = family_template;
    int used = 0;

    auto classify_at = [&](double p, double t_end_override = 0.0) {
        ++used;
        OutcomeLabel label = run_member(with_parameter(family_template, p), setup, t_end_override);
        res.history.emplace_back(p, label);
        return label;
    };

    const OutcomeLabel lo_label = classify_at(p_lo);
    if (lo_label.verdict != Verdict::Dispersed) {
        std::ostringstream os;
        os << "bisect_critical: lower end p=" << p_lo << " classified "
           << to_string(lo_label.verdict) << ", expected dispersed";
        throw BracketError(os.str());
    }
    const OutcomeLabel hi_label = classify_at(p_hi);
    if (hi_label.verdict != Verdict::Singular) {
        std::ostringstream os;
        os << "bisect_critical: upper end p=" << p_hi << " classified "
           << to_string(hi_label.verdict) << ", expected singular";
        throw BracketError(os.str());
    }

    double lo = p_lo, hi = p_hi;
    while (used < budget && (hi - lo) > rel_tol * 0.5 * (hi + lo)) {
        // Ambiguous midpoints: one longer rerun, then off-midpoint probes.
        const double candidates[3] = {0.5, 0.38196601125010515, 0.6180339887498949};
        bool placed = false;
        for (int attempt = 0; attempt < 3 && used < budget; ++attempt) {
            const double p = lo + candidates[attempt] * (hi - lo);
            OutcomeLabel label = classify_at(p);
            if (label.verdict == Verdict::Ambiguous && used < budget)
                label = classify_at(p, 2.0 * setup.t_end);
            if (label.verdict == Verdict::Singular) {
                hi = p;
                placed = true;
                break;
            }
            if (label.verdict == Verdict::Dispersed) {
                lo = p;
                placed = true;
                break;
            }
        }
        if (!placed) break;  // persistent ambiguity: return the partial result
    }

    res.p_lo = lo;
    res.p_hi = hi;
    res.p_star = 0.5 * (lo + hi);
    res.converged = (hi - lo) <= rel_tol * 0.5 * (hi + lo);
    return res;
}

namespace {

SignTestResult sign_pair(const FamilySpec& base, const EvolveSetup& setup) {
    SignTestResult res;
    FamilySpec plus = base;
    FamilySpec minus = base;
    minus.amplitude = -base.amplitude;
    res.plus = run_member(plus, setup, 0.0);
    res.minus = run_member(minus, setup, 0.0);
    if (res.plus.verdict == Verdict::Ambiguous || res.minus.verdict == Verdict::Ambiguous) {
        res.verdict = SignTestVerdict::Indeterminate;
    } else if (res.plus.verdict == Verdict::Singular && res.minus.verdict == Verdict::Dispersed) {
        res.verdict = SignTestVerdict::SignSplit;
    } else {
        res.verdict = SignTestVerdict::NoSplit;
    }
    return res;
}

}  // namespace

// Declared in static_solutions.hpp; defined here where the initial-data
// constructors are available.
SignTestResult nonlinear_sign_test(double a, const PulseParams& pulse, const EvolveSetup& setup) {
    FamilySpec spec;
    spec.kind = FamilyKind::PerturbedStatic;
    spec.amplitude = std::abs(pulse.amplitude);
    spec.extras.a = a;
    spec.extras.pulse_r0 = pulse.r0;
    spec.extras.pulse_width = pulse.width;
    return sign_pair(spec, setup);
}

SignTestResult attractor_sign_test(const AttractorBase& base, const PulseParams& pulse,
                                   const EvolveSetup& setup) {
    if (base.kind == AttractorBase::Kind::Static) return nonlinear_sign_test(base.a, pulse, setup);
    FamilySpec spec;
    spec.kind = FamilyKind::PerturbedSelfSimilar;
    spec.amplitude = std::abs(pulse.amplitude);
    spec.extras.n = base.n;
    spec.extras.t0 = base.t0;
    spec.extras.pulse_r0 = pulse.r0;
    spec.extras.pulse_width = pulse.width;
    return sign_pair(spec, setup);
}

namespace {

std::optional<double> detect_turnaround(const DiagnosticsSeries& series, double min_excursion) {
    const auto& rc = series.centroid_radius;
    if (rc.size() < 5) return std::nullopt;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < rc.size(); ++i)
        if (rc[i] > rc[imax]) imax = i;
    if (imax == 0 || imax + 1 >= rc.size()) return std::nullopt;
    const double rise = rc[imax] - rc.front();
    double after_min = rc[imax];
    for (std::size_t i = imax; i < rc.size(); ++i) after_min = std::min(after_min, rc[i]);
    const double fall = rc[imax] - after_min;
    if (rise < min_excursion || fall < min_excursion) return std::nullopt;
    return series.t[imax];
}

}  // namespace

std::vector<RegimePoint> regime_scan(const std::vector<double>& eps_grid, double Delta,
                                     const EvolveSetup& setup, int jobs) {
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        if (eps_grid[i] <= eps_grid[i - 1])
            throw DomainError("regime_scan: epsilon grid must be ascending");

    auto run_one = [&](double eps) {
        RegimePoint pt;
        pt.eps = eps;
        const FieldState init = turok_spergel(eps, Delta, setup.grid);
        const EvolutionRecord rec = evolve(init, init.t + setup.t_end, setup.grid, setup.model,
                                           setup.numerics, setup.monitors);
        pt.outcome = classify_outcome(rec, setup.classifier);
        const double min_excursion = 0.02 * setup.monitors.centroid_window_fraction *
                                     setup.grid.r_max;
        pt.turnaround_time = detect_turnaround(rec.series, min_excursion);
        if (pt.outcome.verdict == Verdict::Dispersed)
            pt.regime = "disperse";
        else if (pt.outcome.verdict == Verdict::Singular)
            pt.regime = pt.turnaround_time ? "turn-around-collapse" : "quick-collapse";
        else
            pt.regime = "ambiguous";
        return pt;
    };

    std::vector<RegimePoint> out(eps_grid.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < eps_grid.size(); ++i) out[i] = run_one(eps_grid[i]);
        return out;
    }
    std::vector<std::future<RegimePoint>> futures;
    futures.reserve(eps_grid.size());
    for (double eps : eps_grid)
        futures.push_back(std::async(std::launch::async, run_one, eps));
    for (std::size_t i = 0; i < futures.size(); ++i) out[i] = futures[i].get();
    return out;
}

}  // namespace wavemap
