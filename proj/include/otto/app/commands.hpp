#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "otto/app/config.hpp"

namespace otto::app {

// Process exit statuses.
inline constexpr int kExitRefrigerating = 0;
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotRefrigerating = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitMarginalCycle = 3;
inline constexpr int kExitNoConvergence = 4;
inline constexpr int kExitValidateFailed = 5;
inline constexpr int kExitOtherError = 6;

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  std::optional<Format> format;  // overrides the config when set
  std::optional<int> samples;    // trajectory samples per segment
  std::optional<double> tolerance;
};

/// Output directory: --out, else OTTO_OUT_DIR, else the working directory.
std::filesystem::path default_out_dir();

int cmd_limit_cycle(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_trajectory(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_sweep(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_island_map(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_approx_compare(const RunConfig& c, const CommandOptions& o, std::ostream& log);
int cmd_validate(const RunConfig& c, const CommandOptions& o, std::ostream& log);

/// Commands that apply to a config: limit-cycle and trajectory always,
/// sweep with a [sweep] section, island-map for two-axis grids and
/// approx-compare when a regime is set.
std::vector<std::string> applicable_commands(const RunConfig& c);
/// Runs every applicable command; the first error propagates.
int cmd_run_all(const RunConfig& c, const CommandOptions& o, std::ostream& log);

/// Maps a library error to its exit status.
int exit_status(const std::exception& e);

}  // namespace otto::app
