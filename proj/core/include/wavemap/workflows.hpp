#pragma once

#include <string>

#include "wavemap/config.hpp"

#include <json.hpp>

namespace wavemap {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kNumericalError = 3,
    kAmbiguousOnly = 4,
    kIoError = 5,
};

struct RunOutput {
    int exit_code = kOk;
    nlohmann::json summary;
};

/// Executes one named workflow: evolve | bisect | ab-solve | lambda-spec |
/// static-solve | omega-spec | sign-test | regime-scan | ss-compare |
/// convergence | figure.  Writes data files, a JSON summary, and a config
/// echo (with every materialized default) into out_dir.  Throws ConfigError
/// for bad input, IoError for filesystem trouble, and other wavemap errors
/// for numerical failures; the CLI maps those to exit codes.
RunOutput run_command(const std::string& command, KeyValueConfig& cfg, const std::string& out_dir,
                      int jobs = 1);

/// Plot-ready data for the four standard figures (which = "fig1".."fig4").
RunOutput emit_figure_data(const std::string& which, KeyValueConfig& cfg,
                           const std::string& out_dir, int jobs = 1);

}  // namespace wavemap
