#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz/sweep.hpp"

namespace orlicz {

inline constexpr int kReportSchemaVersion = 1;

/// Exact CSV header of per-t tables.
inline constexpr std::string_view kTableHeader = "t,phi_t,value,std_error,bias_bound,method";

struct ReportRow {
  double t = 0.0;
  double phi_t = 0.0;
  /// NaN when the estimator failed at this t.
  double value = 0.0;
  double std_error = 0.0;
  double bias_bound = 0.0;
  /// Estimator tag, or "failed".
  std::string method;
  bool affine_regime = false;
  bool bias_flagged = false;
  std::uint64_t samples = 0;
  std::string error;
};

struct ReportFit {
  std::string method = "least_squares_affine_in_phi_t";
  double intercept = 0.0;
  double slope = 0.0;
  double residual = 0.0;
  double intercept_std_error = 0.0;
  bool weighted = false;
  std::vector<std::size_t> indices;
};

struct ReportVerdict {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

/// Machine-readable outcome of a sweep or verify run. Deliberately free of
/// timings, worker counts and paths, so that equal inputs give equal bytes.
struct Report {
  int schema_version = kReportSchemaVersion;
  std::string command;
  std::string tool_version;
  /// Canonical JSON of the run configuration.
  std::string config;
  int dimension = 1;
  std::string young_function;
  std::string test_function;
  double modular_value = 0.0;
  /// "closed_form", "quadrature" or "override".
  std::string modular_method;
  double target = 0.0;
  std::vector<ReportRow> table;
  std::optional<ReportFit> fit;
  double grid_sup = 0.0;
  double grid_sup_t = 0.0;
  std::vector<ReportVerdict> verdicts;
  bool all_pass = true;

  std::string to_json() const;
  /// Throws ConfigError on schema mismatch.
  static Report from_json(std::string_view text);
  std::string to_csv() const;

  friend bool operator==(const Report& a, const Report& b);
};

/// Build the per-t table, fit and supremum sections from a sweep.
Report make_report(std::string command, std::string config_echo,
                   const TestFunction& u, const YoungFunction& phi,
                   const SweepResult& sweep, std::string modular_method);

std::string tool_version();

}  // namespace orlicz
