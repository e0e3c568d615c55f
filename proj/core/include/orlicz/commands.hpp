#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz/config.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFailure = 1,
  kExitConfigError = 2,
  kExitEstimatorFailure = 3,
};

/// Result of running one command in-process, before anything is written.
struct CommandOutcome {
  int exit_code = kExitOk;
  /// verify and sweep.
  std::optional<Report> report;
  /// delta2 and oracle print a JSON document instead of writing files.
  std::string printed;
  std::string diagnostics;
  double wall_clock_seconds = 0.0;
};

/// verify, sweep, delta2 or oracle on a parsed config. Never throws for
/// configuration or estimator problems; they map to exit codes.
CommandOutcome execute(std::string_view command, const RunConfig& config);

/// Checks run by verify when the config lists none.
std::vector<std::string> default_checks(const RunConfig& config);

struct CliOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> out_dir;
};

/// Full CLI behaviour: load, override, execute, write artifacts.
/// stdout receives only the report path (or the printed JSON for delta2 and
/// oracle); diagnostics go to stderr.
int run_cli(std::string_view command, const CliOptions& options, std::ostream& out,
            std::ostream& err);

}  // namespace orlicz
