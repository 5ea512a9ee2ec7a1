/// @file harness.hpp
/// @brief Run orchestration and the command-line entry point.
///
/// Every run directory holds config.txt (the effective configuration) and
/// manifest.csv (key,value rows: config hash, model, grid, wall time, final
/// diagnostics). Model-specific outputs:
///   ESVM, VM          diagnostics.csv, n1/n2/p1/p2/curl_v1/curl_v2 .csv, final.vtk
///   L-ESVM, L-VM      limit.csv, mask.csv, interfaces.csv, level1/level2/q/pressure .csv, final.vtk
///   STATIONARY(-1S.)  mask.csv, pressure.csv, q.csv, jumps.csv, transmission.csv, interfaces.csv, final.vtk
///   sweep             sweep.csv plus run_000, run_001, ... one directory per row
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tissue/config.hpp"

namespace tissue {

enum ExitStatus : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitSolverFailure = 2,
    kExitInvariantViolation = 3,
};

/// An existing file is parsed as a config; anything else must be a preset name.
/// Throws ConfigError.
[[nodiscard]] RunConfig load_config(const std::string& arg);

/// Parses "NXxNY". Throws ConfigError.
[[nodiscard]] std::pair<int, int> parse_grid_size(const std::string& text);

using Manifest = std::vector<std::pair<std::string, std::string>>;

/// Runs any model into `dir` and returns the manifest rows written there. Progress and
/// warnings go to `log`. Throws ConfigError on unusable input and SolverFailure,
/// StepFailure or LimitFailure when the numerics break down.
Manifest execute_run(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log);

/// The stationary problem on the partition of the initial data (cells above 1/2).
/// For non-stationary models the time keys are ignored and no wall margin is required.
Manifest execute_stationary(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log);

/// The [sweep] block of an ESVM or VM config, up to `jobs` runs at a time. Returns true
/// when every row succeeded.
bool execute_sweep(const RunConfig& cfg, const std::filesystem::path& dir, int jobs, std::ostream& log);

/// Commands: run <config>, sweep <config>, stationary <config>, check.
/// Options: --out DIR, --seed N, --grid NXxNY, --jobs N.
/// Returns an ExitStatus value.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tissue
