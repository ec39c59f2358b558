// Acceptance suite: one pass/fail line per criterion.
//
//   wavemap_acceptance [--criterion N]
//
// Each criterion is self-contained so ctest can run them in parallel.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "wavemap/criticality.hpp"
#include "wavemap/errors.hpp"
#include "wavemap/io.hpp"
#include "wavemap/workflows.hpp"

using namespace wavemap;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Reporter {
    std::ostringstream detail;
    bool ok = true;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "  FAILED: " << what << "\n";
        } else {
            detail << "  ok: " << what << "\n";
        }
    }
    void info(const std::string& what) { detail << "  " << what << "\n"; }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---- shared setups ----

SelfSimilarOptions quick_ss() {
    SelfSimilarOptions o;
    o.z_max = 2.0;
    return o;
}

int count_class(const std::vector<EigenvalueResult>& spec, ModeClass c) {
    int k = 0;
    for (const auto& e : spec)
        if (e.classification == c) ++k;
    return k;
}

const EigenvalueResult* find_class(const std::vector<EigenvalueResult>& spec, ModeClass c) {
    for (const auto& e : spec)
        if (e.classification == c) return &e;
    return nullptr;
}

// ---- criteria ----

// 1: the n=1 branch has exactly one non-gauge negative eigenvalue, at -6.33 (2%).
void criterion1(Reporter& rep) {
    SelfSimilarProfile p1 = solve_ab(1, quick_ss());
    auto spec = lambda_spectrum(p1, -90.0, 5.0);
    const int unstable = count_class(spec, ModeClass::Unstable);
    rep.require(unstable == 1, "exactly one non-gauge negative eigenvalue (found " +
                                   std::to_string(unstable) + ")");
    if (const EigenvalueResult* u = find_class(spec, ModeClass::Unstable)) {
        rep.require(std::abs(u->lambda + 6.33) <= 0.02 * 6.33,
                    "unstable eigenvalue " + fmt(u->lambda) + " within 2% of -6.33");
    }
}

// 2: gauge mode at -1.000 +- 1e-3 for n in {0,1,2,3}.
void criterion2(Reporter& rep) {
    for (int n = 0; n <= 3; ++n) {
        SelfSimilarProfile p = solve_ab(n, quick_ss());
        auto spec = lambda_spectrum(p, -1.5, -0.5);
        const EigenvalueResult* g = find_class(spec, ModeClass::Gauge);
        rep.require(g != nullptr, "gauge mode found for n=" + std::to_string(n));
        if (g)
            rep.require(std::abs(g->lambda + 1.0) <= 1e-3,
                        "n=" + std::to_string(n) + " gauge eigenvalue " + fmt(g->lambda) +
                            " within 1e-3 of -1");
    }
}

// 3: unstable mode counts 0 / 1 / >=2 / >=2 for n = 0..3.
void criterion3(Reporter& rep) {
    const int expect_min[4] = {0, 1, 2, 2};
    for (int n = 0; n <= 3; ++n) {
        SelfSimilarProfile p = solve_ab(n, quick_ss());
        auto spec = lambda_spectrum(p, -90.0, 5.0);
        const int unstable = count_class(spec, ModeClass::Unstable);
        std::ostringstream os;
        os << "n=" << n << " unstable count " << unstable;
        if (n <= 1)
            rep.require(unstable == expect_min[n], os.str() + " == " +
                                                       std::to_string(expect_min[n]));
        else
            rep.require(unstable >= expect_min[n],
                        os.str() + " >= " + std::to_string(expect_min[n]));
    }
}

// 4: the n=0 profile is 2 arctan z to 1e-6.
void criterion4(Reporter& rep) {
    SelfSimilarProfile p0 = solve_ab(0, quick_ss());
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double z = i / 4000.0;
        sup = std::max(sup, std::abs(p0.chi_at(z) - ts_closed_form(z)));
    }
    rep.require(sup <= 1e-6, "sup |chi_0 - 2 arctan z| = " + fmt(sup) + " <= 1e-6");
}

// 5: quadratic convergence and energy conservation of the evolver.
void criterion5(Reporter& rep) {
    ModelParams m;
    NumericsParams np;
    auto make = [&](const RadialGrid& g) { return gaussian(0.1, 5.0, 1.0, g); };
    ConvergenceResult res = convergence_order(make, 30.0, {0.04, 0.02, 0.01}, 10.0, m, np);
    rep.require(std::abs(res.order - 2.0) <= 0.2,
                "Richardson order " + fmt(res.order) + " within 2.0 +- 0.2");

    RadialGrid g = make_uniform_grid(30.0, 0.01);
    FieldState s = gaussian(0.1, 5.0, 1.0, g);
    MonitorSpec mon;
    mon.samples = 40;
    mon.snapshots = 0;
    EvolutionRecord rec = evolve(s, 20.0, g, m, np, mon);
    double drift = 0.0;
    for (double e : rec.series.energy)
        drift = std::max(drift, std::abs(e - rec.series.energy.front()) /
                                    rec.series.energy.front());
    rep.require(drift < 1e-3, "pre-outflow energy drift " + fmt(drift) + " < 0.1%");
}

// 6: bisect the gaussian family to 1e-8 and match the marginally subcritical
// run against the n=1 self-similar profile across log-time frames.
void criterion6(Reporter& rep) {
    EvolveSetup s;
    s.grid = make_clustered_grid(40.0, 2e-3, 0.02, 1.02);
    s.monitors.samples = 220;
    s.monitors.snapshots = 0;
    s.t_end = 45.0;

    FamilySpec fam;
    fam.kind = FamilyKind::Gaussian;
    fam.r0 = 5.0;
    fam.width = 1.0;

    CriticalSearchResult res = bisect_critical(fam, 1e-3, 3.0, 1e-8, 80, s);
    const double rel = (res.p_hi - res.p_lo) / res.p_star;
    rep.require(res.converged && rel <= 1e-8,
                "bisection bracket " + fmt(rel) + " <= 1e-8 (A* = " + fmt(res.p_star) + ", " +
                    std::to_string(res.history.size()) + " runs)");
    if (!res.converged) return;

    // Collapse time from the marginally supercritical end.
    FamilySpec super = fam;
    super.amplitude = res.p_hi;
    FieldState init_s = make_initial_data(super, s.grid);
    EvolutionRecord rec_s =
        evolve(init_s, init_s.t + s.t_end, s.grid, s.model, s.numerics, s.monitors);
    rep.require(classify_outcome(rec_s, s.classifier).verdict == Verdict::Singular,
                "supercritical end collapses");
    const double T_star = collapse_time(rec_s).T_star;
    rep.info("estimated collapse time T* = " + fmt(T_star));

    // Frames of the marginally subcritical run, equally spaced in log time.
    FamilySpec sub = fam;
    sub.amplitude = res.p_lo;
    FieldState init = make_initial_data(sub, s.grid);
    MonitorSpec mon = s.monitors;
    const double dtau = 0.8, span0 = 1.2;
    for (int j = 0; j < 5; ++j) mon.snapshot_times.push_back(T_star - span0 * std::exp(-dtau * j));
    EvolutionRecord rec = evolve(init, init.t + s.t_end, s.grid, s.model, s.numerics, mon);

    SelfSimilarProfile p1 = solve_ab(1, quick_ss());
    auto frames = ss_compare(rec, p1, T_star);
    rep.require(frames.size() >= 4, "at least 4 usable log-time frames (got " +
                                        std::to_string(frames.size()) + ")");
    int good = 0;
    for (std::size_t j = 1; j < frames.size(); ++j) {
        rep.info("frame " + std::to_string(j) + ": tau = " + fmt(frames[j].tau) +
                 ", deviation = " + fmt(frames[j].deviation));
        if (frames[j].deviation <= 0.05) ++good;
    }
    rep.require(good >= 3,
                "sup-norm deviation <= 5% on >= 3 frames after the aligned one (got " +
                    std::to_string(good) + ")");
}

// 7: the a=1 static solution sits on threshold: +pulse collapses, -pulse disperses.
void criterion7(Reporter& rep) {
    EvolveSetup s;
    s.grid = make_uniform_grid(60.0, 0.025);
    s.monitors.samples = 200;
    s.monitors.snapshots = 0;
    s.t_end = 50.0;

    PulseParams pulse;
    pulse.amplitude = 0.05;
    pulse.r0 = 10.0;
    pulse.width = 2.0;
    SignTestResult res = nonlinear_sign_test(1.0, pulse, s);
    rep.info("plus:  " + to_string(res.plus.verdict) + " (" + res.plus.evidence.note + ")");
    rep.info("minus: " + to_string(res.minus.verdict) + " (" + res.minus.evidence.note + ")");
    rep.require(res.plus.verdict == Verdict::Singular, "positive pulse collapses");
    rep.require(res.minus.verdict == Verdict::Dispersed, "negative pulse disperses");
    rep.require(res.verdict == SignTestVerdict::SignSplit, "verdict is sign-split");
}

// 8: at least two omega^2 < 0 modes of the a=1 static solution, stable to <1%
// under doubling the shooting radius.
void criterion8(Reporter& rep) {
    StaticProfile p = solve_static(1.0, 1000.0);
    auto modes = omega_spectrum(p, -10.0, -1e-4, 300.0);
    auto modes2 = omega_spectrum(p, -10.0, -1e-4, 600.0);
    rep.require(modes.size() >= 2, "found " + std::to_string(modes.size()) +
                                       " unstable modes at R_ode = 300 (need >= 2)");
    rep.require(modes2.size() >= modes.size(), "root count persists at R_ode = 600");
    const std::size_t k = std::min(modes.size(), modes2.size());
    for (std::size_t i = 0; i < k; ++i) {
        const double shift = std::abs(modes2[i].omega_sq - modes[i].omega_sq) /
                             std::abs(modes[i].omega_sq);
        rep.require(shift < 0.01, "omega^2 = " + fmt(modes[i].omega_sq) +
                                      " stable to <1% under doubling R_ode (shift " +
                                      fmt(shift) + ")");
    }
}

// 9: intermediate-attractor exclusivity: sign split for n=1, none for n=2.
void criterion9(Reporter& rep) {
    EvolveSetup s;
    s.grid = make_clustered_grid(30.0, 1e-3, 0.02, 1.02);
    s.monitors.samples = 220;
    s.monitors.snapshots = 0;
    s.t_end = 21.0;  // runs start at t0 = -1

    PulseParams pulse;
    pulse.amplitude = 0.02;
    pulse.r0 = 0.5;
    pulse.width = 0.2;

    AttractorBase ab1;
    ab1.kind = AttractorBase::Kind::SelfSimilar;
    ab1.n = 1;
    ab1.t0 = -1.0;
    SignTestResult r1 = attractor_sign_test(ab1, pulse, s);
    rep.info("AB1 plus:  " + to_string(r1.plus.verdict) + " (" + r1.plus.evidence.note + ")");
    rep.info("AB1 minus: " + to_string(r1.minus.verdict) + " (" + r1.minus.evidence.note + ")");
    rep.require(r1.verdict == SignTestVerdict::SignSplit, "AB1 shows the sign split");

    AttractorBase ab2 = ab1;
    ab2.n = 2;
    SignTestResult r2 = attractor_sign_test(ab2, pulse, s);
    rep.info("AB2 plus:  " + to_string(r2.plus.verdict) + " (" + r2.plus.evidence.note + ")");
    rep.info("AB2 minus: " + to_string(r2.minus.verdict) + " (" + r2.minus.evidence.note + ")");
    rep.require(r2.verdict == SignTestVerdict::NoSplit, "AB2 shows no sign split");
}

// 10: classification anchors.
void criterion10(Reporter& rep) {
    EvolveSetup s;
    s.grid = make_uniform_grid(50.0, 0.02);
    s.monitors.samples = 200;
    s.monitors.snapshots = 0;
    s.t_end = 75.0;
    {
        FieldState init = turok_spergel(1.0, 1.0, s.grid);
        EvolutionRecord rec = evolve(init, s.t_end, s.grid, s.model, s.numerics, s.monitors);
        OutcomeLabel label = classify_outcome(rec, s.classifier);
        rep.require(label.verdict == Verdict::Singular,
                    "Turok-Spergel eps=1 singular (" + label.evidence.note + ")");
    }
    {
        FieldState init = gaussian(1e-3, 5.0, 1.0, s.grid);
        EvolutionRecord rec = evolve(init, s.t_end, s.grid, s.model, s.numerics, s.monitors);
        OutcomeLabel label = classify_outcome(rec, s.classifier);
        rep.require(label.verdict == Verdict::Dispersed,
                    "gaussian A=1e-3 dispersed (" + label.evidence.note + ")");
    }
}

// 11: rescaling identity of the static family.
void criterion11(Reporter& rep) {
    StaticProfile p1 = solve_static(1.0, 1000.0);
    StaticProfile p012 = solve_static(0.12, 1000.0);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double r = 0.5 + (800.0 - 0.5) * i / 200.0;
        worst = std::max(worst, std::abs(p012.chi_at(r) - p1.chi_at(0.12 * r)));
    }
    rep.require(worst <= 1e-8,
                "sup |chi_0.12(r) - chi_1(0.12 r)| = " + fmt(worst) + " <= 1e-8");
}

// 12: the property umbrella (module invariants + the flagged fig-4 check).
void criterion12(Reporter& rep) {
    ModelParams m;
    NumericsParams np;

    // Profile residual bounds and crossing counts for n = 0..3.
    for (int n = 0; n <= 3; ++n) {
        SelfSimilarProfile p = solve_ab(n, quick_ss());
        rep.require(p.residual_norm <= 1e-8, "n=" + std::to_string(n) + " profile residual " +
                                                 fmt(p.residual_norm) + " <= 1e-8");
        rep.require(count_crossings(p) == n,
                    "n=" + std::to_string(n) + " crossing count correct");
    }

    // Spectrum stability under the match-point change 1/2 -> 1/3.
    {
        SelfSimilarProfile p1 = solve_ab(1, quick_ss());
        SpectrumOptions third;
        third.z_match = 1.0 / 3.0;
        auto sa = lambda_spectrum(p1, -8.0, -0.5);
        auto sb = lambda_spectrum(p1, -8.0, -0.5, 64, third);
        bool stable = sa.size() == sb.size();
        double worst = 0.0;
        if (stable)
            for (std::size_t i = 0; i < sa.size(); ++i)
                worst = std::max(worst, std::abs(sa[i].lambda - sb[i].lambda));
        rep.require(stable && worst < 1e-6,
                    "eigenvalues move " + fmt(worst) + " < 1e-6 under z_match 1/2 -> 1/3");
    }

    // Static-solution residual and the evolver consistency check.
    {
        StaticProfile p = solve_static(1.0, 100.0);
        double worst = 0.0;
        for (double r : {0.5, 5.0, 50.0})
            worst = std::max(worst,
                             std::abs(r * r * p.curve.second_deriv(r) +
                                      2.0 * r * p.chi_deriv_at(r) - std::sin(2.0 * p.chi_at(r))));
        rep.require(worst <= 1e-8, "static residual at spot radii " + fmt(worst) + " <= 1e-8");
    }
    {
        // Feeding the static solution to the evolver keeps it static (away
        // from the outer boundary, whose radiation condition does not match
        // the pi/2 tail; its influence moves inward at speed 1).
        RadialGrid g = make_uniform_grid(60.0, 0.025);
        StaticProfile bg = solve_static(1.0, 72.0);
        FieldState init = perturbed_static(bg, 0.0, 10.0, 2.0, g);
        MonitorSpec mon;
        mon.samples = 10;
        mon.snapshots = 0;
        mon.snapshot_times = {10.0, 30.0, 50.0};
        mon.blowup.enabled = false;
        EvolutionRecord rec = evolve(init, 50.0, g, m, np, mon);
        double worst = 0.0;
        for (const Snapshot& s : rec.snapshots) {
            const double r_ok = 60.0 - (s.t - rec.t_begin) - 1.0;
            for (std::size_t i = 0; i < g.size() && g.r[i] <= r_ok; ++i)
                worst = std::max(worst, std::abs(s.chi[i] - bg.chi_at(g.r[i])));
        }
        rep.require(worst < 5e-3, "static solution stays static to t=50 (sup drift " +
                                      fmt(worst) + ")");
    }

    // Bisection bracket bookkeeping on a coarse search.
    {
        EvolveSetup s;
        s.grid = make_uniform_grid(25.0, 0.05);
        s.monitors.samples = 150;
        s.monitors.snapshots = 0;
        s.t_end = 40.0;
        FamilySpec fam;
        fam.kind = FamilyKind::Gaussian;
        fam.r0 = 5.0;
        fam.width = 1.0;
        CriticalSearchResult res = bisect_critical(fam, 1e-3, 3.0, 1e-3, 30, s);
        double max_disp = 0.0, min_sing = 1e30;
        for (const auto& [pp, label] : res.history) {
            if (label.verdict == Verdict::Dispersed) max_disp = std::max(max_disp, pp);
            if (label.verdict == Verdict::Singular) min_sing = std::min(min_sing, pp);
        }
        rep.require(res.converged && max_disp == res.p_lo && min_sing == res.p_hi &&
                        max_disp < min_sing,
                    "bisection history bookkeeping is monotone");
    }

    // Determinism and round-trip of the emitted files.
    {
        namespace fs = std::filesystem;
        auto run_into = [&](const fs::path& d) {
            fs::remove_all(d);
            KeyValueConfig cfg;
            cfg.set("family.kind", "gaussian");
            cfg.set("family.amplitude", "0.05");
            cfg.set("grid.r_max", "15");
            cfg.set("grid.dr", "0.05");
            cfg.set("run.t_end", "6");
            cfg.set("monitors.samples", "30");
            cfg.set("monitors.snapshots", "3");
            run_command("evolve", cfg, d.string());
        };
        const fs::path d1 = fs::temp_directory_path() / "wm_acc_det1";
        const fs::path d2 = fs::temp_directory_path() / "wm_acc_det2";
        run_into(d1);
        run_into(d2);
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        bool identical = true;
        for (const char* f : {"evolve_series.csv", "evolve_snap_1.csv", "evolve_summary.json"})
            identical = identical && slurp(d1 / f) == slurp(d2 / f) && !slurp(d1 / f).empty();
        rep.require(identical, "identical configs give byte-identical data files");
        Table series = read_table((d1 / "evolve_series.csv").string());
        rep.require(series.rows.size() == 31 && series.columns.front() == "t",
                    "emitted series re-parses");
    }

    // Range-flag soundness over the canonical run library: every completed
    // run whose chi-range exceeded pi must classify singular.  Violations are
    // findings, not assertion failures.
    {
        EvolveSetup s;
        s.grid = make_uniform_grid(30.0, 0.05);
        s.monitors.samples = 150;
        s.monitors.snapshots = 0;
        s.t_end = 45.0;
        struct Probe {
            const char* name;
            FieldState init;
        };
        std::vector<Probe> probes;
        probes.push_back({"ts-eps1", turok_spergel(1.0, 1.0, s.grid)});
        probes.push_back({"tanh-3.5", tanh_family(3.5, 10.0, 1.0, s.grid)});
        probes.push_back({"gauss-1.0", gaussian(1.0, 5.0, 1.0, s.grid)});
        for (auto& pr : probes) {
            EvolutionRecord rec =
                evolve(pr.init, pr.init.t + s.t_end, s.grid, s.model, s.numerics, s.monitors);
            OutcomeLabel label = classify_outcome(rec, s.classifier);
            if (rec.range_exceeded_pi && rec.halt == HaltReason::Completed &&
                label.verdict != Verdict::Singular)
                rep.info("FINDING: run " + std::string(pr.name) +
                         " exceeded range pi but classified " + to_string(label.verdict));
            else
                rep.info(std::string(pr.name) + ": range>pi=" +
                         (rec.range_exceeded_pi ? "yes" : "no") + ", verdict " +
                         to_string(label.verdict));
        }
    }

    // Classifier stability of the canonical verdicts under refinement.
    {
        auto verdict_at = [&](double dr, double cfl) {
            EvolveSetup s;
            s.grid = make_uniform_grid(30.0, dr);
            s.numerics.cfl = cfl;
            s.monitors.samples = 150;
            s.monitors.snapshots = 0;
            s.t_end = 45.0;
            FieldState ts = turok_spergel(1.0, 1.0, s.grid);
            FieldState gs = gaussian(1e-3, 5.0, 1.0, s.grid);
            Verdict v1 =
                classify_outcome(evolve(ts, s.t_end, s.grid, s.model, s.numerics, s.monitors),
                                 s.classifier)
                    .verdict;
            Verdict v2 =
                classify_outcome(evolve(gs, s.t_end, s.grid, s.model, s.numerics, s.monitors),
                                 s.classifier)
                    .verdict;
            return std::make_pair(v1, v2);
        };
        auto base = verdict_at(0.06, 0.25);
        auto fine = verdict_at(0.03, 0.25);
        auto slow = verdict_at(0.06, 0.125);
        rep.require(base == fine && base == slow &&
                        base.first == Verdict::Singular && base.second == Verdict::Dispersed,
                    "canonical verdicts invariant under halving dt and doubling resolution");
    }

    // Collapse-time consistency for the exact n=0 slice under refinement.
    {
        auto tstar_at = [&](double dr_min) {
            EvolveSetup s;
            s.grid = make_clustered_grid(12.0, dr_min, 0.02, 1.02);
            s.monitors.samples = 400;
            s.monitors.snapshots = 0;
            FieldState init = perturbed_self_similar(0, -1.0, 0.0, 5.0, 1.0, s.grid);
            EvolutionRecord rec =
                evolve(init, init.t + 1.2, s.grid, s.model, s.numerics, s.monitors);
            return collapse_time(rec).T_star;
        };
        const double t1 = tstar_at(2e-3);
        const double t2 = tstar_at(1e-3);
        rep.info("T*(h) = " + fmt(t1) + ", T*(h/2) = " + fmt(t2));
        rep.require(std::abs(t2) < std::abs(t1) + 5e-3 && std::abs(t2) < 0.02,
                    "collapse-time estimate tightens toward 0 under refinement");
    }

    // Energy-vs-domain behavior: logarithmic data converges, Turok-Spergel
    // data grows without bound.
    {
        double e_log_prev = 0.0, e_ts_prev = 0.0;
        std::vector<double> dlog, dts;
        for (double r_max : {100.0, 1000.0, 10000.0}) {
            RadialGrid g = make_uniform_grid(r_max, r_max / 40000.0);
            const double e_log = total_energy(logarithmic(0.5, 1.0, 1.0, g), g, m);
            const double e_ts = total_energy(turok_spergel(0.5, 1.0, g), g, m);
            if (e_log_prev > 0.0) {
                dlog.push_back(e_log - e_log_prev);
                dts.push_back(e_ts - e_ts_prev);
            }
            e_log_prev = e_log;
            e_ts_prev = e_ts;
        }
        rep.require(dlog[1] < 0.2 * dlog[0] && dts[1] > 5.0 * dts[0],
                    "logarithmic energy converges with r_max; Turok-Spergel energy is unbounded");
    }

    // Flagged qualitative reproduction: the eps = 0.302 evolution sheds energy
    // and approaches a static profile; the best-matching parameter is
    // reported, not hard-asserted (the underlying width Delta is assumed 1).
    {
        namespace fs = std::filesystem;
        const fs::path d = fs::temp_directory_path() / "wm_acc_fig4";
        fs::remove_all(d);
        KeyValueConfig cfg;
        cfg.set("figure.which", "fig4");
        cfg.set("grid.r_max", "150");
        cfg.set("grid.dr", "0.05");
        cfg.set("run.t_end", "140");
        cfg.set("monitors.samples", "140");
        cfg.set("monitors.snapshots", "0");
        RunOutput out = run_command("figure", cfg, d.string());
        if (out.summary["results"]["fit"].contains("best_a")) {
            const double best_a = out.summary["results"]["fit"]["best_a"].get<double>();
            rep.info("FLAGGED (Delta assumed 1): eps=0.302 best-match static a = " + fmt(best_a) +
                     ", misfit " + fmt(out.summary["results"]["fit"]["misfit"].get<double>()));
        } else {
            rep.info("FLAGGED: eps=0.302 run halted before the fit time (" +
                     out.summary["results"]["halt"].get<std::string>() + ")");
        }
    }
}

using CriterionFn = void (*)(Reporter&);

struct Entry {
    int id;
    const char* title;
    CriterionFn fn;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    const Entry entries[] = {
        {1, "AB1 unstable eigenvalue -6.33 (2%)", criterion1},
        {2, "gauge mode -1.000 (1e-3) for n=0..3", criterion2},
        {3, "unstable mode counts 0/1/>=2/>=2", criterion3},
        {4, "AB0 equals 2 arctan z (1e-6)", criterion4},
        {5, "evolver order 2.0 (0.2), energy drift < 0.1%", criterion5},
        {6, "gaussian bisection to 1e-8 + self-similar attractor frames", criterion6},
        {7, "static threshold sign split (a=1)", criterion7},
        {8, "at least two omega^2 < 0 static modes, R-stable", criterion8},
        {9, "attractor exclusivity: AB1 splits, AB2 does not", criterion9},
        {10, "TS eps=1 singular; gaussian A=1e-3 dispersed", criterion10},
        {11, "static rescaling identity (1e-8)", criterion11},
        {12, "module property suite + flagged fig-4 reproduction", criterion12},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        if (only != 0 && e.id != only) continue;
        Reporter rep;
        try {
            e.fn(rep);
        } catch (const Error& ex) {
            rep.ok = false;
            rep.detail << "  exception: " << ex.what() << "\n";
        }
        std::printf("[%s] criterion %d: %s\n%s", rep.ok ? "PASS" : "FAIL", e.id, e.title,
                    rep.detail.str().c_str());
        std::fflush(stdout);
        if (!rep.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
