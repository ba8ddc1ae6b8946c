#pragma once

// Command-line front end. Each command reads a RunConfig, writes its JSON and
// CSV artefacts into an output directory and returns a process exit code.

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "layerpot/config.hpp"

namespace layerpot {

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 1,     ///< configuration or input data rejected
    kExitFailure = 2,   ///< numerical failure or a failing verdict
    kExitMarginal = 3,  ///< at least one Marginal verdict and no failures
    kExitRecovery = 4,  ///< manufactured solution not recovered within threshold
};

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

struct CommandContext {
    RunConfig cfg;
    std::filesystem::path out_dir;
    std::ostream* log = nullptr;  ///< human-readable progress; may be null
};

int cmd_check_weights(const CommandContext& ctx);
int cmd_hardy(const CommandContext& ctx);
int cmd_potential_eval(const CommandContext& ctx);
int cmd_solve(const CommandContext& ctx);
int cmd_verify_identities(const CommandContext& ctx);
int cmd_report(const CommandContext& ctx);

/// Full CLI: args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace layerpot
