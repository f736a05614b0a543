#pragma once

#include <ostream>

#include "config.hpp"

namespace bgw::cli {

/// Each command writes its files under config.output_dir(), prints a short
/// summary to `out` and returns the process exit code (0 success or
/// satisfied, 1 violated or failed).
int cmd_simulate_chain(const RunConfig& config, std::ostream& out);
int cmd_simulate_sde(const RunConfig& config, std::ostream& out);
int cmd_check(const RunConfig& config, std::ostream& out);
int cmd_generator_check(const RunConfig& config, std::ostream& out);
int cmd_convergence(const RunConfig& config, std::ostream& out);

}  // namespace bgw::cli
