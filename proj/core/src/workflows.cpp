#include "wavemap/workflows.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "wavemap/criticality.hpp"
#include "wavemap/errors.hpp"
#include "wavemap/io.hpp"

namespace wavemap {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kSchemaVersion = 1;

// ---- config -> domain objects ----

RadialGrid build_grid(const KeyValueConfig& cfg) {
    const std::string kind = cfg.get_string("grid.kind", "uniform");
    const double r_max = cfg.get_double("grid.r_max", 50.0);
    if (kind == "uniform") {
        return make_uniform_grid(r_max, cfg.get_double("grid.dr", 0.025));
    }
    if (kind == "clustered") {
        return make_clustered_grid(r_max, cfg.get_double("grid.dr_min", 1e-3),
                                   cfg.get_double("grid.dr_max", 0.02),
                                   cfg.get_double("grid.growth", 1.02));
    }
    throw ConfigError("grid.kind must be uniform or clustered, got '" + kind + "'");
}

ModelParams build_model(const KeyValueConfig& cfg) {
    ModelParams m;
    m.m = cfg.get_int("model.m", 1);
    if (m.m < 1) throw ConfigError("model.m must be a positive integer");
    return m;
}

NumericsParams build_numerics(const KeyValueConfig& cfg) {
    NumericsParams n;
    n.cfl = cfg.get_double("numerics.cfl", 0.25);
    n.iter_tol = cfg.get_double("numerics.iter_tol", 1e-10);
    n.max_iters = cfg.get_int("numerics.max_iters", 50);
    n.boundary_order = cfg.get_int("numerics.boundary_order", 2);
    return n;
}

ClassifierParams build_classifier(const KeyValueConfig& cfg) {
    ClassifierParams c;
    c.theta_blow = cfg.get_double("thresholds.theta_blow", 1e6);
    c.rising_k = cfg.get_int("thresholds.rising_k", 10);
    c.f_disp = cfg.get_double("thresholds.f_disp", 1e-3);
    c.sustained_fraction = cfg.get_double("thresholds.sustained_fraction", 0.10);
    c.promote_range_flag = cfg.get_bool("thresholds.promote_range_flag", true);
    return c;
}

MonitorSpec build_monitors(const KeyValueConfig& cfg, const RadialGrid& grid,
                           const ClassifierParams& cls) {
    MonitorSpec m;
    m.samples = cfg.get_int("monitors.samples", 200);
    m.snapshots = cfg.get_int("monitors.snapshots", 20);
    m.probe_radii = cfg.get_double_list(
        "monitors.probe_radii", {grid.r_max / 8.0, grid.r_max / 4.0, grid.r_max / 2.0});
    m.r_in_fraction = cfg.get_double("monitors.r_in_fraction", 0.25);
    m.centroid_window_fraction = cfg.get_double("monitors.centroid_window_fraction", 0.5);
    m.blowup.enabled = cfg.get_bool("monitors.halt_on_blowup", true);
    m.blowup.theta = cls.theta_blow;
    m.blowup.rising_k = cls.rising_k;
    return m;
}

FamilySpec build_family(const KeyValueConfig& cfg) {
    FamilySpec f;
    f.kind = family_kind_from_string(cfg.get_string("family.kind", "gaussian"));
    f.amplitude = cfg.get_double("family.amplitude", 0.1);
    f.r0 = cfg.get_double("family.r0", 5.0);
    f.width = cfg.get_double("family.width", 1.0);
    f.extras.a = cfg.get_double("family.extras.a", 1.0);
    f.extras.n = cfg.get_int("family.extras.n", 1);
    f.extras.t0 = cfg.get_double("family.extras.t0", -1.0);
    f.extras.pulse_r0 = cfg.get_double("family.extras.pulse_r0", 10.0);
    f.extras.pulse_width = cfg.get_double("family.extras.pulse_width", 2.0);
    f.extras.ramp_radius = cfg.get_double("family.extras.ramp_radius", -1.0);
    return f;
}

EvolveSetup build_setup(const KeyValueConfig& cfg) {
    EvolveSetup s;
    s.grid = build_grid(cfg);
    s.model = build_model(cfg);
    s.numerics = build_numerics(cfg);
    s.classifier = build_classifier(cfg);
    s.monitors = build_monitors(cfg, s.grid, s.classifier);
    s.t_end = cfg.get_double("run.t_end", 1.5 * s.grid.r_max);
    if (!cfg.get_bool("run.deterministic", true))
        throw ConfigError("run.deterministic cannot be disabled; all workflows are seedless");
    return s;
}

// ---- output helpers ----

std::string run_id(const KeyValueConfig& cfg, const std::string& command) {
    return cfg.get_string("run.id", command);
}

fs::path prep_out_dir(const std::string& out_dir) {
    fs::path p(out_dir.empty() ? "." : out_dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw IoError("cannot create output directory: " + p.string());
    return p;
}

int verdict_code(Verdict v) {
    switch (v) {
        case Verdict::Singular: return 1;
        case Verdict::Dispersed: return 0;
        case Verdict::Ambiguous: return -1;
    }
    return -1;
}

json evidence_json(const OutcomeLabel& label) {
    const OutcomeEvidence& e = label.evidence;
    return json{{"verdict", to_string(label.verdict)},
                {"peak_central_density", e.peak_central_density},
                {"initial_central_density", e.initial_central_density},
                {"growth_factor", e.growth_factor},
                {"range_exceeded_pi", e.range_exceeded_pi},
                {"range_flag_time", e.range_exceeded_pi ? e.range_flag_time : 0.0},
                {"range_promoted", e.range_promoted},
                {"final_inner_energy", e.final_inner_energy},
                {"initial_energy", e.initial_energy},
                {"halt", to_string(e.halt)},
                {"halt_time", e.halt_time},
                {"note", e.note}};
}

void write_series(const fs::path& dir, const std::string& id, const EvolutionRecord& rec,
                  const MonitorSpec& mon) {
    Table t;
    t.columns = {"t", "E", "E_inner", "central_density", "chi_range", "centroid_r"};
    for (double pr : mon.probe_radii) t.columns.push_back("chi_r" + format_g17(pr));
    t.metadata["r_in"] = format_g17(rec.r_in);
    t.metadata["halt"] = to_string(rec.halt);
    for (std::size_t i = 0; i < rec.series.size(); ++i) {
        std::vector<double> row = {rec.series.t[i],
                                   rec.series.energy[i],
                                   rec.series.inner_energy[i],
                                   rec.series.central_density[i],
                                   rec.series.chi_range[i],
                                   rec.series.centroid_radius[i]};
        for (const auto& p : rec.series.probes) row.push_back(p[i]);
        t.add_row(row);
    }
    write_table((dir / (id + "_series.csv")).string(), t);
}

void write_snapshots(const fs::path& dir, const std::string& id, const EvolutionRecord& rec) {
    for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
        const Snapshot& s = rec.snapshots[k];
        Table t;
        t.columns = {"r", "chi", "pi", "rho"};
        t.metadata["t"] = format_g17(s.t);
        t.metadata["index"] = std::to_string(k);
        for (std::size_t i = 0; i < rec.r.size(); ++i)
            t.add_row({rec.r[i], s.chi[i], s.pi[i], s.rho[i]});
        std::ostringstream name;
        name << id << "_snap_" << k << ".csv";
        write_table((dir / name.str()).string(), t);
    }
}

void write_profile_table(const fs::path& dir, const std::string& name,
                         const std::map<std::string, std::string>& meta,
                         const std::vector<std::array<double, 3>>& rows,
                         const std::string& xname) {
    Table t;
    t.columns = {xname, "chi", "dchi"};
    t.metadata = meta;
    for (const auto& r : rows) t.add_row({r[0], r[1], r[2]});
    write_table((dir / name).string(), t);
}

json finalize(const fs::path& dir, const std::string& id, const std::string& command,
              KeyValueConfig& cfg, json results) {
    json summary{{"schema_version", kSchemaVersion},
                 {"command", command},
                 {"run_id", id},
                 {"results", std::move(results)}};
    write_text_file((dir / (id + "_summary.json")).string(), summary.dump(2) + "\n");
    write_text_file((dir / (id + "_config.txt")).string(), cfg.echo());
    return summary;
}

// ---- individual commands ----

RunOutput cmd_evolve(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    EvolveSetup s = build_setup(cfg);
    const FamilySpec fam = build_family(cfg);
    cfg.require_all_consumed();
    const FieldState init = make_initial_data(fam, s.grid);
    const EvolutionRecord rec =
        evolve(init, init.t + s.t_end, s.grid, s.model, s.numerics, s.monitors);
    const OutcomeLabel label = classify_outcome(rec, s.classifier);
    write_series(dir, id, rec, s.monitors);
    write_snapshots(dir, id, rec);
    RunOutput out;
    out.summary = finalize(dir, id, "evolve", cfg,
                           json{{"outcome", evidence_json(label)},
                                {"final_energy", rec.series.energy.back()},
                                {"samples", rec.series.size()},
                                {"snapshots", rec.snapshots.size()}});
    out.exit_code = (label.verdict == Verdict::Ambiguous) ? kAmbiguousOnly : kOk;
    return out;
}

RunOutput cmd_bisect(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    EvolveSetup s = build_setup(cfg);
    const FamilySpec fam = build_family(cfg);
    const double p_lo = cfg.get_double("bisect.p_lo", 1e-3);
    const double p_hi = cfg.get_double("bisect.p_hi", 3.0);
    const double rel_tol = cfg.get_double("bisect.rel_tol", 1e-8);
    const int budget = cfg.get_int("bisect.budget", 80);
    cfg.require_all_consumed();

    const CriticalSearchResult res = bisect_critical(fam, p_lo, p_hi, rel_tol, budget, s);

    Table t;
    t.columns = {"parameter", "verdict", "peak_central_density", "growth_factor", "halt_time"};
    for (const auto& [p, label] : res.history)
        t.add_row({p, static_cast<double>(verdict_code(label.verdict)),
                   label.evidence.peak_central_density, label.evidence.growth_factor,
                   label.evidence.halt_time});
    write_table((dir / (id + "_history.csv")).string(), t);

    RunOutput out;
    out.summary = finalize(dir, id, "bisect", cfg,
                           json{{"p_star", res.p_star},
                                {"p_lo", res.p_lo},
                                {"p_hi", res.p_hi},
                                {"relative_bracket", (res.p_hi - res.p_lo) / res.p_star},
                                {"converged", res.converged},
                                {"runs", res.history.size()}});
    out.exit_code = res.converged ? kOk : kAmbiguousOnly;
    return out;
}

SelfSimilarOptions ss_options(const KeyValueConfig& cfg) {
    SelfSimilarOptions o;
    o.z_max = cfg.get_double("ss.z_max", 50.0);
    o.ode_tol = cfg.get_double("ss.ode_tol", 1e-12);
    o.res_tol = cfg.get_double("ss.res_tol", 1e-8);
    return o;
}

std::vector<std::array<double, 3>> sample_profile(const SelfSimilarProfile& p, double z_hi,
                                                  int count) {
    std::vector<std::array<double, 3>> rows;
    rows.push_back({0.0, 0.0, p.b});
    for (int i = 1; i < count; ++i) {
        const double z = z_hi * static_cast<double>(i) / (count - 1);
        rows.push_back({z, p.chi_at(z), p.chi_deriv_at(z)});
    }
    return rows;
}

RunOutput cmd_ab_solve(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    const int n = cfg.get_int("ss.n", 1);
    const SelfSimilarOptions o = ss_options(cfg);
    const double z_out = cfg.get_double("ss.export_z_max", 1.0);
    const int count = cfg.get_int("ss.export_points", 501);
    cfg.require_all_consumed();
    const SelfSimilarProfile p = solve_ab(n, o);
    std::map<std::string, std::string> meta{{"n", std::to_string(p.n)},
                                            {"b", format_g17(p.b)},
                                            {"c", format_g17(p.c)},
                                            {"residual_norm", format_g17(p.residual_norm)}};
    write_profile_table(dir, id + "_profile.csv", meta, sample_profile(p, z_out, count), "z");
    RunOutput out;
    out.summary = finalize(dir, id, "ab-solve", cfg,
                           json{{"n", p.n},
                                {"b", p.b},
                                {"c", p.c},
                                {"residual_norm", p.residual_norm},
                                {"crossings", count_crossings(p)}});
    return out;
}

const char* mode_class_name(ModeClass c) {
    switch (c) {
        case ModeClass::Gauge: return "gauge";
        case ModeClass::Unstable: return "unstable";
        case ModeClass::Stable: return "stable";
    }
    return "unknown";
}

RunOutput cmd_lambda_spec(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    const int n = cfg.get_int("ss.n", 1);
    SelfSimilarOptions o = ss_options(cfg);
    const double lo = cfg.get_double("lambda.lo", -30.0);
    const double hi = cfg.get_double("lambda.hi", 5.0);
    SpectrumOptions so;
    so.scan_step = cfg.get_double("lambda.scan_step", 0.1);
    so.z_match = cfg.get_double("lambda.z_match", 0.5);
    const int count_limit = cfg.get_int("lambda.count_limit", 64);
    cfg.require_all_consumed();

    const SelfSimilarProfile p = solve_ab(n, o);
    const std::vector<EigenvalueResult> spec = lambda_spectrum(p, lo, hi, count_limit, so);

    json modes = json::array();
    int unstable = 0;
    bool gauge_found = false;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const EigenvalueResult& e = spec[k];
        modes.push_back({{"lambda", e.lambda}, {"class", mode_class_name(e.classification)}});
        if (e.classification == ModeClass::Unstable) ++unstable;
        if (e.classification == ModeClass::Gauge) gauge_found = true;
        Table t;
        t.columns = {"z", "mode", "dmode"};
        t.metadata["lambda"] = format_g17(e.lambda);
        t.metadata["class"] = mode_class_name(e.classification);
        t.metadata["n"] = std::to_string(n);
        for (std::size_t i = 0; i < e.mode.size(); ++i)
            t.add_row({e.mode.x[i], e.mode.y[i], e.mode.yp[i]});
        std::ostringstream name;
        name << id << "_mode_" << k << ".csv";
        write_table((dir / name.str()).string(), t);
    }

    RunOutput out;
    out.summary = finalize(dir, id, "lambda-spec", cfg,
                           json{{"n", n},
                                {"b", p.b},
                                {"lambda_lo", lo},
                                {"lambda_hi", hi},
                                {"modes", modes},
                                {"unstable_count", unstable},
                                {"gauge_found", gauge_found}});
    return out;
}

RunOutput cmd_static_solve(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    const double a = cfg.get_double("static.a", 1.0);
    const double R = cfg.get_double("static.r_ode", 1000.0);
    const int count = cfg.get_int("static.export_points", 2001);
    cfg.require_all_consumed();
    const StaticProfile p = solve_static(a, R);
    std::vector<std::array<double, 3>> rows;
    rows.push_back({0.0, 0.0, p.a});
    for (int i = 1; i < count; ++i) {
        // log-spaced export: the tail oscillates in ln r
        const double r = p.r_ser * std::pow(R / p.r_ser, static_cast<double>(i) / (count - 1));
        rows.push_back({r, p.chi_at(r), p.chi_deriv_at(r)});
    }
    std::map<std::string, std::string> meta{{"a", format_g17(p.a)},
                                            {"residual_norm", format_g17(p.residual_norm)}};
    write_profile_table(dir, id + "_profile.csv", meta, rows, "r");
    RunOutput out;
    out.summary = finalize(dir, id, "static-solve", cfg,
                           json{{"a", p.a},
                                {"r_ode", R},
                                {"residual_norm", p.residual_norm},
                                {"chi_at_r1", p.chi_at(std::min(1.0, R))},
                                {"chi_at_end", p.chi_at(R)}});
    return out;
}

RunOutput cmd_omega_spec(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    const double a = cfg.get_double("static.a", 1.0);
    const double R_bg = cfg.get_double("static.r_ode", 1000.0);
    const double lo = cfg.get_double("omega.lo", -10.0);
    const double hi = cfg.get_double("omega.hi", 0.0);
    const double R_mode = cfg.get_double("omega.r_ode", 300.0);
    cfg.require_all_consumed();
    const StaticProfile p = solve_static(a, std::max(R_bg, R_mode));
    const std::vector<StaticMode> modes = omega_spectrum(p, lo, hi, R_mode);

    json roots = json::array();
    for (std::size_t k = 0; k < modes.size(); ++k) {
        roots.push_back(modes[k].omega_sq);
        Table t;
        t.columns = {"r", "mode", "dmode"};
        t.metadata["omega_sq"] = format_g17(modes[k].omega_sq);
        t.metadata["a"] = format_g17(a);
        for (std::size_t i = 0; i < modes[k].mode.size(); ++i)
            t.add_row({modes[k].mode.x[i], modes[k].mode.y[i], modes[k].mode.yp[i]});
        std::ostringstream name;
        name << id << "_mode_" << k << ".csv";
        write_table((dir / name.str()).string(), t);
    }
    RunOutput out;
    out.summary = finalize(dir, id, "omega-spec", cfg,
                           json{{"a", a},
                                {"omega_lo", lo},
                                {"omega_hi", hi},
                                {"r_ode", R_mode},
                                {"omega_sq_roots", roots},
                                {"unstable_count", modes.size()}});
    return out;
}

RunOutput cmd_sign_test(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    EvolveSetup s = build_setup(cfg);
    const std::string base_kind = cfg.get_string("signtest.base", "static");
    PulseParams pulse;
    pulse.amplitude = cfg.get_double("signtest.amplitude", 0.05);
    pulse.r0 = cfg.get_double("signtest.pulse_r0", 10.0);
    pulse.width = cfg.get_double("signtest.pulse_width", 2.0);
    AttractorBase base;
    if (base_kind == "static") {
        base.kind = AttractorBase::Kind::Static;
        base.a = cfg.get_double("signtest.a", 1.0);
    } else if (base_kind == "ab") {
        base.kind = AttractorBase::Kind::SelfSimilar;
        base.n = cfg.get_int("signtest.n", 1);
        base.t0 = cfg.get_double("signtest.t0", -1.0);
    } else {
        throw ConfigError("signtest.base must be static or ab, got '" + base_kind + "'");
    }
    cfg.require_all_consumed();

    const SignTestResult res = attractor_sign_test(base, pulse, s);
    RunOutput out;
    out.summary = finalize(dir, id, "sign-test", cfg,
                           json{{"base", base_kind},
                                {"verdict", to_string(res.verdict)},
                                {"plus", evidence_json(res.plus)},
                                {"minus", evidence_json(res.minus)}});
    out.exit_code = (res.verdict == SignTestVerdict::Indeterminate) ? kAmbiguousOnly : kOk;
    return out;
}

RunOutput cmd_regime_scan(KeyValueConfig& cfg, const fs::path& dir, const std::string& id,
                          int jobs) {
    EvolveSetup s = build_setup(cfg);
    const std::vector<double> eps = cfg.get_double_list("regime.eps_list", {0.01, 0.302, 1.0});
    const double Delta = cfg.get_double("regime.delta", 1.0);
    cfg.require_all_consumed();
    const std::vector<RegimePoint> pts = regime_scan(eps, Delta, s, jobs);

    Table t;
    t.columns = {"eps", "verdict", "peak_central_density", "turnaround_time", "halt_time"};
    json rows = json::array();
    bool any_decided = false;
    for (const RegimePoint& p : pts) {
        t.add_row({p.eps, static_cast<double>(verdict_code(p.outcome.verdict)),
                   p.outcome.evidence.peak_central_density,
                   p.turnaround_time ? *p.turnaround_time : std::nan(""),
                   p.outcome.evidence.halt_time});
        json row{{"eps", p.eps},
                 {"verdict", to_string(p.outcome.verdict)},
                 {"regime", p.regime}};
        if (p.turnaround_time) row["turnaround_time"] = *p.turnaround_time;
        rows.push_back(row);
        if (p.outcome.verdict != Verdict::Ambiguous) any_decided = true;
    }
    write_table((dir / (id + "_scan.csv")).string(), t);
    RunOutput out;
    out.summary = finalize(dir, id, "regime-scan", cfg, json{{"delta", Delta}, {"points", rows}});
    out.exit_code = any_decided ? kOk : kAmbiguousOnly;
    return out;
}

struct SsCompareRun {
    double T_star = 0.0;
    std::vector<DeviationFrame> frames;
    EvolutionRecord record;
    SelfSimilarProfile profile;
};

SsCompareRun run_ss_compare(KeyValueConfig& cfg) {
    EvolveSetup s = build_setup(cfg);
    const FamilySpec fam = build_family(cfg);
    const int n = cfg.get_int("sscompare.n", 1);
    double T_star = cfg.get_double("sscompare.t_star", 0.0);
    const int frames = cfg.get_int("sscompare.frames", 4);
    const double dtau = cfg.get_double("sscompare.dtau", 0.8);
    const double span0 = cfg.get_double("sscompare.span0", 1.0);
    SsCompareOptions sco;
    sco.z_lo = cfg.get_double("sscompare.z_lo", 0.15);
    sco.z_hi = cfg.get_double("sscompare.z_hi", 0.85);

    const FieldState init = make_initial_data(fam, s.grid);
    if (T_star <= init.t) {
        // Estimate the collapse time from this run's own density growth.
        EvolutionRecord probe =
            evolve(init, init.t + s.t_end, s.grid, s.model, s.numerics, s.monitors);
        const OutcomeLabel label = classify_outcome(probe, s.classifier);
        if (label.verdict != Verdict::Singular)
            throw EstimationError(
                "ss-compare: run is not singular; supply sscompare.t_star explicitly");
        T_star = collapse_time(probe).T_star;
    }

    MonitorSpec mon = s.monitors;
    mon.snapshot_times.clear();
    for (int j = 0; j < frames; ++j) {
        const double tj = T_star - span0 * std::exp(-dtau * j);
        if (tj > init.t && tj < init.t + s.t_end) mon.snapshot_times.push_back(tj);
    }
    if (mon.snapshot_times.empty())
        throw InsufficientDataError("ss-compare: no frame times inside the run window");

    SsCompareRun out;
    out.record = evolve(init, init.t + s.t_end, s.grid, s.model, s.numerics, mon);
    SelfSimilarOptions so;
    so.z_max = std::max(2.0, sco.z_hi + 0.5);
    out.profile = solve_ab(n, so);
    out.frames = ss_compare(out.record, out.profile, T_star, sco);
    out.T_star = T_star;
    return out;
}

RunOutput cmd_ss_compare(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    SsCompareRun r = run_ss_compare(cfg);
    cfg.require_all_consumed();
    Table t;
    t.columns = {"frame", "t", "tau", "deviation"};
    t.metadata["T_star"] = format_g17(r.T_star);
    json frames = json::array();
    for (std::size_t j = 0; j < r.frames.size(); ++j) {
        t.add_row({static_cast<double>(j), r.frames[j].t, r.frames[j].tau,
                   r.frames[j].deviation});
        frames.push_back({{"t", r.frames[j].t},
                          {"tau", r.frames[j].tau},
                          {"deviation", r.frames[j].deviation}});
    }
    write_table((dir / (id + "_frames.csv")).string(), t);
    RunOutput out;
    out.summary = finalize(dir, id, "ss-compare", cfg,
                           json{{"T_star", r.T_star}, {"n", r.profile.n}, {"frames", frames}});
    return out;
}

RunOutput cmd_convergence(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    const FamilySpec fam = build_family(cfg);
    const ModelParams model = build_model(cfg);
    const NumericsParams numerics = build_numerics(cfg);
    const double r_max = cfg.get_double("grid.r_max", 30.0);
    const std::vector<double> drs = cfg.get_double_list("conv.drs", {0.04, 0.02, 0.01});
    const double t_fix = cfg.get_double("conv.t_fix", 10.0);
    cfg.require_all_consumed();

    auto make = [&](const RadialGrid& g) { return make_initial_data(fam, g); };
    const ConvergenceResult res = convergence_order(make, r_max, drs, t_fix, model, numerics);

    json errors = json::array();
    for (double e : res.errors) errors.push_back(e);
    RunOutput out;
    out.summary = finalize(dir, id, "convergence", cfg,
                           json{{"order", res.exact_null ? json("exact") : json(res.order)},
                                {"exact_null", res.exact_null},
                                {"errors", errors},
                                {"t_fix", t_fix}});
    return out;
}

// ---- figures ----

RunOutput fig1(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    const int n_max = cfg.get_int("figure.n_max", 8);
    const int points = cfg.get_int("figure.points", 501);
    cfg.require_all_consumed();
    SelfSimilarOptions o;
    o.z_max = 2.0;
    std::vector<SelfSimilarProfile> profs;
    for (int n = 0; n <= n_max; ++n) profs.push_back(solve_ab(n, o));
    Table t;
    t.columns = {"z"};
    json bs = json::array();
    for (const auto& p : profs) {
        t.columns.push_back("chi_n" + std::to_string(p.n));
        bs.push_back(p.b);
    }
    for (int i = 0; i < points; ++i) {
        const double z = static_cast<double>(i) / (points - 1);
        std::vector<double> row = {z};
        for (const auto& p : profs) row.push_back(p.chi_at(z));
        t.add_row(row);
    }
    write_table((dir / (id + "_fig1.csv")).string(), t);
    RunOutput out;
    out.summary = finalize(dir, id, "figure", cfg, json{{"which", "fig1"}, {"b", bs}});
    return out;
}

RunOutput fig2(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    SsCompareRun r = run_ss_compare(cfg);
    const int points = cfg.get_int("figure.points", 301);
    cfg.require_all_consumed();

    // One overlay file per frame: chi of the run and of the profile vs ln r.
    json frames = json::array();
    for (std::size_t j = 0; j < r.frames.size(); ++j) {
        const double t = r.frames[j].t;
        const double scale = r.T_star - t;  // z = r / scale (aligned tau refines this)
        const Snapshot* snap = nullptr;
        for (const Snapshot& s : r.record.snapshots)
            if (std::abs(s.t - t) < 1e-9 * (1.0 + std::abs(t))) snap = &s;
        if (!snap) continue;
        Table tbl;
        tbl.columns = {"ln_r", "chi_run", "chi_profile"};
        tbl.metadata["t"] = format_g17(t);
        tbl.metadata["tau"] = format_g17(r.frames[j].tau);
        const double r_lo = 0.05 * scale, r_hi = std::min(2.0 * scale, r.record.r.back());
        for (int i = 0; i < points; ++i) {
            const double rr = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (points - 1));
            // nearest grid sample of the run
            auto it = std::lower_bound(r.record.r.begin(), r.record.r.end(), rr);
            std::size_t gi = std::min<std::size_t>(it - r.record.r.begin(),
                                                   r.record.r.size() - 1);
            tbl.add_row({std::log(rr), snap->chi[gi], r.profile.chi_at(rr / scale)});
        }
        std::ostringstream name;
        name << id << "_fig2_frame" << j << ".csv";
        write_table((dir / name.str()).string(), tbl);
        frames.push_back({{"t", t}, {"tau", r.frames[j].tau}, {"deviation", r.frames[j].deviation}});
    }
    RunOutput out;
    out.summary = finalize(dir, id, "figure", cfg,
                           json{{"which", "fig2"}, {"T_star", r.T_star}, {"frames", frames}});
    return out;
}

RunOutput fig3(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    EvolveSetup s = build_setup(cfg);
    const double a = cfg.get_double("signtest.a", 1.0);
    PulseParams pulse;
    pulse.amplitude = cfg.get_double("signtest.amplitude", 0.05);
    pulse.r0 = cfg.get_double("signtest.pulse_r0", 10.0);
    pulse.width = cfg.get_double("signtest.pulse_width", 2.0);
    const std::vector<double> times = cfg.get_double_list("figure.times", {});
    cfg.require_all_consumed();

    const StaticProfile bg = solve_static(a, std::max(1.2 * s.grid.r_max, 50.0));
    MonitorSpec mon = s.monitors;
    if (!times.empty()) mon.snapshot_times = times;

    json sides = json::array();
    for (int sign : {+1, -1}) {
        const FieldState init = perturbed_static(bg, sign * pulse.amplitude, pulse.r0,
                                                 pulse.width, s.grid);
        const EvolutionRecord rec =
            evolve(init, init.t + s.t_end, s.grid, s.model, s.numerics, mon);
        const OutcomeLabel label = classify_outcome(rec, s.classifier);
        const std::string tag = sign > 0 ? "plus" : "minus";
        for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
            Table t;
            t.columns = {"r", "chi", "rho"};
            t.metadata["t"] = format_g17(rec.snapshots[k].t);
            t.metadata["sign"] = tag;
            for (std::size_t i = 0; i < rec.r.size(); ++i)
                t.add_row({rec.r[i], rec.snapshots[k].chi[i], rec.snapshots[k].rho[i]});
            std::ostringstream name;
            name << id << "_fig3_" << tag << "_" << k << ".csv";
            write_table((dir / name.str()).string(), t);
        }
        sides.push_back({{"sign", tag}, {"outcome", evidence_json(label)}});
    }
    {
        Table t;
        t.columns = {"r", "chi"};
        t.metadata["a"] = format_g17(a);
        for (std::size_t i = 0; i < s.grid.size(); ++i)
            t.add_row({s.grid.r[i], bg.chi_at(s.grid.r[i])});
        write_table((dir / (id + "_fig3_static.csv")).string(), t);
    }
    RunOutput out;
    out.summary = finalize(dir, id, "figure", cfg, json{{"which", "fig3"}, {"sides", sides}});
    return out;
}

// Energy density of a static profile (Pi = 0).
double static_rho(const StaticProfile& p, double r, int m) {
    const double d = p.chi_deriv_at(r);
    const double sn = std::sin(p.chi_at(r));
    const double mm = static_cast<double>(m) * (m + 1);
    return 0.5 * r * r * (d * d + mm * sn * sn / (r * r));
}

RunOutput fig4(KeyValueConfig& cfg, const fs::path& dir, const std::string& id) {
    EvolveSetup s = build_setup(cfg);
    const double eps = cfg.get_double("figure.eps", 0.302);
    const double Delta = cfg.get_double("figure.delta", 1.0);
    const double t_fit = cfg.get_double("figure.fit_time", 126.0);
    const double a_lo = cfg.get_double("figure.a_lo", 0.03);
    const double a_hi = cfg.get_double("figure.a_hi", 0.6);
    const double r_fit_lo = cfg.get_double("figure.fit_r_lo", 0.5);
    const double r_fit_hi = cfg.get_double("figure.fit_r_hi", 20.0);
    std::vector<double> times = cfg.get_double_list("figure.times", {0.0, 60.0, t_fit});
    cfg.require_all_consumed();

    MonitorSpec mon = s.monitors;
    mon.snapshot_times = times;
    if (std::find(times.begin(), times.end(), t_fit) == times.end())
        mon.snapshot_times.push_back(t_fit);
    mon.blowup.enabled = true;

    const FieldState init = turok_spergel(eps, Delta, s.grid);
    const EvolutionRecord rec = evolve(init, init.t + s.t_end, s.grid, s.model, s.numerics, mon);

    // Frame files.
    for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
        Table t;
        t.columns = {"r", "rho", "chi"};
        t.metadata["t"] = format_g17(rec.snapshots[k].t);
        for (std::size_t i = 0; i < rec.r.size(); ++i)
            t.add_row({rec.r[i], rec.snapshots[k].rho[i], rec.snapshots[k].chi[i]});
        std::ostringstream name;
        name << id << "_fig4_frame" << k << ".csv";
        write_table((dir / name.str()).string(), t);
    }

    // Best-matching static parameter at the fit time (golden section on the
    // L2 misfit of the energy density).
    const Snapshot* fit_snap = nullptr;
    for (const Snapshot& sn : rec.snapshots)
        if (std::abs(sn.t - t_fit) < 1e-9 * (1.0 + t_fit)) fit_snap = &sn;
    json fit_info;
    if (fit_snap) {
        auto misfit = [&](double a) {
            const StaticProfile sp = solve_static(a, std::max(1.2 * r_fit_hi / a, 50.0));
            double acc = 0.0;
            int cnt = 0;
            for (std::size_t i = 0; i < rec.r.size(); ++i) {
                const double r = rec.r[i];
                if (r < r_fit_lo || r > r_fit_hi) continue;
                const double d = fit_snap->rho[i] - static_rho(sp, r, s.model.m);
                acc += d * d;
                ++cnt;
            }
            return cnt ? acc / cnt : 1e300;
        };
        double a = a_lo, b = a_hi;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = misfit(x1), f2 = misfit(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = misfit(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = misfit(x2);
            }
        }
        const double best_a = 0.5 * (a + b);
        const StaticProfile sp = solve_static(best_a, std::max(1.2 * r_fit_hi / best_a, 50.0));
        Table t;
        t.columns = {"r", "rho_static"};
        t.metadata["a"] = format_g17(best_a);
        for (std::size_t i = 0; i < rec.r.size(); ++i)
            t.add_row({rec.r[i], static_rho(sp, rec.r[i], s.model.m)});
        write_table((dir / (id + "_fig4_static.csv")).string(), t);
        fit_info = json{{"best_a", best_a},
                        {"misfit", misfit(best_a)},
                        {"fit_time", t_fit},
                        {"delta_assumed", Delta}};
    } else {
        fit_info = json{{"note", "run halted before the fit time"},
                        {"halt", to_string(rec.halt)},
                        {"halt_time", rec.halt_time}};
    }

    RunOutput out;
    out.summary =
        finalize(dir, id, "figure", cfg,
                 json{{"which", "fig4"}, {"eps", eps}, {"fit", fit_info},
                      {"halt", to_string(rec.halt)}, {"halt_time", rec.halt_time}});
    return out;
}

}  // namespace

RunOutput emit_figure_data(const std::string& which, KeyValueConfig& cfg,
                           const std::string& out_dir, int jobs) {
    (void)jobs;
    const fs::path dir = prep_out_dir(out_dir);
    const std::string id = run_id(cfg, which);
    if (which == "fig1") return fig1(cfg, dir, id);
    if (which == "fig2") return fig2(cfg, dir, id);
    if (which == "fig3") return fig3(cfg, dir, id);
    if (which == "fig4") return fig4(cfg, dir, id);
    throw ConfigError("figure.which must be fig1..fig4, got '" + which + "'");
}

RunOutput run_command(const std::string& command, KeyValueConfig& cfg, const std::string& out_dir,
                      int jobs) {
    const fs::path dir = prep_out_dir(out_dir);
    const std::string id = run_id(cfg, command);
    if (command == "evolve") return cmd_evolve(cfg, dir, id);
    if (command == "bisect") return cmd_bisect(cfg, dir, id);
    if (command == "ab-solve") return cmd_ab_solve(cfg, dir, id);
    if (command == "lambda-spec") return cmd_lambda_spec(cfg, dir, id);
    if (command == "static-solve") return cmd_static_solve(cfg, dir, id);
    if (command == "omega-spec") return cmd_omega_spec(cfg, dir, id);
    if (command == "sign-test") return cmd_sign_test(cfg, dir, id);
    if (command == "regime-scan") return cmd_regime_scan(cfg, dir, id, jobs);
    if (command == "ss-compare") return cmd_ss_compare(cfg, dir, id);
    if (command == "convergence") return cmd_convergence(cfg, dir, id);
    if (command == "figure")
        return emit_figure_data(cfg.get_string("figure.which", "fig1"), cfg, out_dir, jobs);
    throw ConfigError("unknown command: " + command);
}

}  // namespace wavemap
