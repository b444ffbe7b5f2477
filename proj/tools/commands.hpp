#pragma once

#include <filesystem>

#include "run_config.hpp"

namespace stlab::cli {

// Each command returns the process exit code: 0 on success, 1 when an
// invariant check fails. Configuration problems are thrown as ConfigError
// and mapped to exit code 2 by the caller.
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir);
int cmd_compare(const RunConfig& cfg, const std::filesystem::path& out_dir);
int cmd_evolve(const RunConfig& cfg, const std::filesystem::path& out_dir);
int cmd_diagnose(const std::filesystem::path& dir);

}  // namespace stlab::cli
