#pragma once

#include <ostream>
#include <string>

#include "imcons/error.hpp"
#include "imcons/io.hpp"

namespace imcons::cli {

enum ExitCode { kOk = 0, kValidation = 1, kRuntime = 2 };

/// Assumption table for every agent, the schedule and the rate intervals.
int cmd_check(const RunConfig& config, std::ostream& out);

/// Writes <out>/<agent>.mcai and prints t*, row counts and ω² bounds.
int cmd_mcai(const RunConfig& config, const std::string& out_dir, std::ostream& out);

/// Writes <out>/<agent>.csv, metrics.json, config.json and, unless
/// `plots` is false, the SVG figure set.
int cmd_run(const RunConfig& config, const std::string& out_dir, bool plots,
            std::ostream& out);

/// Exit code for a library error: configuration and assumption problems are
/// validation failures, everything else is a runtime error.
int exit_code_for(const Error& e);

}  // namespace imcons::cli
