#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavemap/errors.hpp"
#include "wavemap/io.hpp"
#include "wavemap/workflows.hpp"

using namespace wavemap;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("workflows");

TEST_CASE("ab-solve writes a profile, a summary, and a full config echo") {
    fs::path dir = fresh_dir("wm_ab");
    KeyValueConfig cfg;
    cfg.set("ss.n", "0");
    cfg.set("ss.z_max", "2");
    RunOutput out = run_command("ab-solve", cfg, dir.string());
    CHECK(out.exit_code == 0);
    CHECK(out.summary["schema_version"] == 1);
    CHECK(out.summary["results"]["n"] == 0);
    CHECK(std::abs(out.summary["results"]["b"].get<double>() - 2.0) < 1e-8);

    Table prof = read_table((dir / "ab-solve_profile.csv").string());
    CHECK(prof.columns == std::vector<std::string>{"z", "chi", "dchi"});
    CHECK(prof.metadata.count("b") == 1);
    CHECK(prof.rows.front()[0] == 0.0);
    CHECK(prof.rows.front()[1] == 0.0);

    const std::string echo = slurp(dir / "ab-solve_config.txt");
    CHECK(echo.find("ss.ode_tol") != std::string::npos);     // materialized default
    CHECK(echo.find("run.id") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical data files") {
    fs::path d1 = fresh_dir("wm_det1");
    fs::path d2 = fresh_dir("wm_det2");
    for (const fs::path& d : {d1, d2}) {
        KeyValueConfig cfg;
        cfg.set("family.kind", "gaussian");
        cfg.set("family.amplitude", "0.05");
        cfg.set("grid.r_max", "15");
        cfg.set("grid.dr", "0.1");
        cfg.set("run.t_end", "25");
        cfg.set("monitors.samples", "20");
        cfg.set("monitors.snapshots", "3");
        RunOutput out = run_command("evolve", cfg, d.string());
        CHECK(out.exit_code == 0);
    }
    for (const char* name : {"evolve_series.csv", "evolve_snap_0.csv", "evolve_snap_2.csv",
                             "evolve_summary.json", "evolve_config.txt"}) {
        CHECK(slurp(d1 / name) == slurp(d2 / name));
        CHECK(!slurp(d1 / name).empty());
    }
}

TEST_CASE("emitted run files re-parse into tables") {
    fs::path dir = fresh_dir("wm_roundtrip");
    KeyValueConfig cfg;
    cfg.set("family.kind", "turok-spergel");
    cfg.set("family.amplitude", "0.25");
    cfg.set("family.r0", "1");
    cfg.set("grid.r_max", "15");
    cfg.set("grid.dr", "0.1");
    cfg.set("run.t_end", "4");
    cfg.set("monitors.samples", "10");
    cfg.set("monitors.snapshots", "2");
    run_command("evolve", cfg, dir.string());
    Table series = read_table((dir / "evolve_series.csv").string());
    CHECK(series.columns.front() == "t");
    CHECK(series.rows.size() == 11);
    Table snap = read_table((dir / "evolve_snap_1.csv").string());
    CHECK(snap.columns == std::vector<std::string>{"r", "chi", "pi", "rho"});
    CHECK(snap.rows.size() >= 150);
}

TEST_CASE("unknown keys are config errors naming the key") {
    fs::path dir = fresh_dir("wm_badkey");
    KeyValueConfig cfg;
    cfg.set("family.kind", "gaussian");
    cfg.set("family.amplitud", "0.1");  // typo
    cfg.set("grid.r_max", "10");
    cfg.set("grid.dr", "0.1");
    cfg.set("run.t_end", "2");
    try {
        run_command("evolve", cfg, dir.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("family.amplitud") != std::string::npos);
    }
    CHECK_THROWS_AS(run_command("no-such-command", cfg, dir.string()), ConfigError);
}

TEST_CASE("deterministic flag cannot be disabled") {
    fs::path dir = fresh_dir("wm_seed");
    KeyValueConfig cfg;
    cfg.set("run.deterministic", "false");
    CHECK_THROWS_AS(run_command("evolve", cfg, dir.string()), ConfigError);
}

TEST_CASE("short ambiguous run exits with the ambiguous-only code") {
    fs::path dir = fresh_dir("wm_ambig");
    KeyValueConfig cfg;
    cfg.set("family.kind", "turok-spergel");
    cfg.set("family.amplitude", "0.25");
    cfg.set("family.r0", "1");
    cfg.set("grid.r_max", "20");
    cfg.set("grid.dr", "0.1");
    cfg.set("run.t_end", "2");  // far too short to decide anything
    cfg.set("monitors.samples", "20");
    cfg.set("monitors.snapshots", "0");
    RunOutput out = run_command("evolve", cfg, dir.string());
    CHECK(out.exit_code == kAmbiguousOnly);
    CHECK(out.summary["results"]["outcome"]["verdict"] == "ambiguous");
}

TEST_CASE("static-solve and omega-spec workflows emit parseable artifacts") {
    fs::path dir = fresh_dir("wm_static");
    {
        KeyValueConfig cfg;
        cfg.set("static.a", "1.0");
        cfg.set("static.r_ode", "200");
        RunOutput out = run_command("static-solve", cfg, dir.string());
        CHECK(out.exit_code == 0);
        Table prof = read_table((dir / "static-solve_profile.csv").string());
        CHECK(prof.columns == std::vector<std::string>{"r", "chi", "dchi"});
    }
    {
        KeyValueConfig cfg;
        cfg.set("static.a", "1.0");
        cfg.set("static.r_ode", "400");
        cfg.set("omega.lo", "-2.0");
        cfg.set("omega.r_ode", "250");
        RunOutput out = run_command("omega-spec", cfg, dir.string());
        CHECK(out.exit_code == 0);
        CHECK(out.summary["results"]["omega_sq_roots"].size() >= 1);
    }
}

TEST_CASE("figure fig1 with only the n=0 branch equals the closed form") {
    fs::path dir = fresh_dir("wm_fig1");
    KeyValueConfig cfg;
    cfg.set("figure.which", "fig1");
    cfg.set("figure.n_max", "0");
    cfg.set("figure.points", "101");
    RunOutput out = run_command("figure", cfg, dir.string());
    CHECK(out.exit_code == 0);
    Table t = read_table((dir / "fig1_fig1.csv").string());
    REQUIRE(t.columns == std::vector<std::string>{"z", "chi_n0"});
    for (const auto& row : t.rows)
        CHECK(std::abs(row[1] - 2.0 * std::atan(row[0])) < 1e-8);
}

TEST_SUITE_END();
