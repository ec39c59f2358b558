// Command-line front end for the equivariant wave-map toolkit.
//
//   wavemap <command> [--config FILE] [--set key=value ...] [--jobs N] [--out DIR]
//
// Commands: evolve, bisect, ab-solve, lambda-spec, static-solve, omega-spec,
// sign-test, regime-scan, ss-compare, convergence, figure.
// The WAVEMAP_OUT environment variable overrides the output directory.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavemap/errors.hpp"
#include "wavemap/workflows.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spherically equivariant wave-map evolution and analysis toolkit"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {
        "evolve",     "bisect",      "ab-solve",   "lambda-spec", "static-solve", "omega-spec",
        "sign-test",  "regime-scan", "ss-compare", "convergence", "figure"};

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    int jobs = 1;

    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key=value configuration file");
        sub->add_option("--set", overrides, "override one key (repeatable)")->take_all();
        sub->add_option("--jobs", jobs, "worker threads for fan-out commands");
        sub->add_option("--out", out_dir, "output directory");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        wavemap::KeyValueConfig cfg;
        if (!config_path.empty()) cfg = wavemap::KeyValueConfig::from_file(config_path);
        for (const std::string& kv : overrides) cfg.set(kv);
        if (const char* env = std::getenv("WAVEMAP_OUT")) out_dir = env;

        const wavemap::RunOutput out = wavemap::run_command(command, cfg, out_dir, jobs);
        std::printf("%s\n", out.summary.dump(2).c_str());
        return out.exit_code;
    } catch (const wavemap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return wavemap::kConfigError;
    } catch (const wavemap::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return wavemap::kIoError;
    } catch (const wavemap::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return wavemap::kNumericalError;
    }
}
