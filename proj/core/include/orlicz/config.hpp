#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz/level_set.hpp"
#include "orlicz/test_function.hpp"
#include "orlicz/young_function.hpp"

namespace orlicz {

struct Tolerances {
  double quadrature = 1e-11;
  double identity = 1e-9;
  double sandwich = 1e-6;
  double bracket = 1e-9;
  double universal = 1e-9;
  double gu_yung_agreement = 1e-12;
};

/// A validated run configuration.
///
/// JSON layout (all keys optional unless the command needs them; unknown
/// keys anywhere are rejected):
///
///   {
///     "dimension": 2,
///     "young_function": {"family": "power", "p": 2.0},
///     "test_function": {"function": "indicator", "R": 1.0, "c": 1.0, "N": 2},
///     "t_grid": {"t_max": 0.2, "t_min": 0.01, "count": 5}   // or {"values": [...]}
///     "method": "exact_piecewise",
///     "monte_carlo": {"samples": 1000000, "truncation_radius": 6.0,
///                     "bias_tolerance": 1e-6},
///     "seed": 42,
///     "threads": 4,
///     "fit_points": 5,
///     "tolerances": {"quadrature": 1e-11, "identity": 1e-9, ...},
///     "checks": ["identity", "sandwich", ...],
///     "expected_modular": 2.0,
///     "output": {"dir": "out", "stem": "run"}
///   }
struct RunConfig {
  int dimension = 0;
  std::optional<YoungFunction> young;
  std::optional<TestFunction> test_function;
  std::vector<double> t_values;
  Method method = Method::ExactPiecewise;
  MonteCarloOptions mc{};
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::size_t fit_points = 5;
  Tolerances tolerances{};
  /// Empty means every check applicable to the configuration.
  std::vector<std::string> checks;
  std::optional<double> expected_modular;
  std::string output_dir = ".";
  std::string output_stem;
  /// Canonical JSON of the computational part of the config (no worker
  /// count, no output paths), embedded in reports.
  std::string echo;
};

/// Names accepted in "checks".
const std::vector<std::string>& known_checks();

/// Parse and validate. Throws ConfigError on any problem, including values
/// rejected by the library constructors.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Replace the seed, keeping the echo in sync.
void override_seed(RunConfig& config, std::uint64_t seed);

/// Throws ConfigError unless the fields needed by `command` are present.
void require_for_command(const RunConfig& config, std::string_view command);

}  // namespace orlicz
