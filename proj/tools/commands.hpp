#pragma once

#include "run_config.hpp"

#include "dmlab/report.hpp"

#include <string>

namespace dmlab::cli {

inline constexpr int kExitValidation = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitTolerance = 4;

struct CommandResult {
    Report report;
    int exit_code = 0;
};

CommandResult cmd_tables(const RunConfig& config);
CommandResult cmd_moments(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_bounds(const RunConfig& config);
CommandResult cmd_zeros(const RunConfig& config);
CommandResult cmd_rv(const RunConfig& config);

// Resolves defaults for `command`, applies the thread budget and dispatches.
CommandResult run_command(const std::string& command, const RunConfig& config);

}  // namespace dmlab::cli
