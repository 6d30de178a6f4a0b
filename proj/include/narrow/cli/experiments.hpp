#pragma once

#include "narrow/cli/report.hpp"

namespace narrow::cli {

// Runs the experiment named by cfg.subcommand. Configuration problems surface
// as ConfigError; failed checks are recorded in the report.
Report run(const ExperimentConfig& cfg);

}  // namespace narrow::cli
