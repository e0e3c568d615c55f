#include "orlicz/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/level_set.hpp"
#include "orlicz/sweep.hpp"

namespace orlicz {
namespace {

using nlohmann::json;

bool contains(const std::vector<std::string>& names, std::string_view name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

SweepOptions sweep_options(const RunConfig& cfg) {
  SweepOptions opts;
  opts.method = cfg.method;
  opts.tol = cfg.tolerances.quadrature;
  opts.modular_tol = cfg.tolerances.quadrature;
  opts.mc = cfg.mc;
  opts.mc.seed = cfg.seed.value_or(0);
  opts.mc.threads = cfg.threads;
  opts.mc.quadrature_tol = cfg.tolerances.quadrature;
  opts.fit_points = cfg.fit_points;
  return opts;
}

void add_verdict(SweepResult& result, const std::string& name, Verdict v) {
  result.verdicts[name] = std::move(v);
}

CommandOutcome run_sweep_like(std::string_view command, const RunConfig& cfg) {
  CommandOutcome outcome;
  const TestFunction& u = *cfg.test_function;
  const YoungFunction& phi = *cfg.young;
  const bool verify = command == "verify";

  std::vector<std::string> checks;
  if (verify) {
    checks = cfg.checks.empty() ? default_checks(cfg) : cfg.checks;
    if (contains(checks, "compact_bracket") && !std::isfinite(u.support_radius())) {
      throw ConfigError("compact_bracket needs a compactly supported test function");
    }
    if (contains(checks, "gu_yung") && phi.family() != YoungFunction::Family::Power) {
      throw ConfigError("gu_yung needs a power Young function");
    }
  }

  const SweepOptions opts = sweep_options(cfg);
  SweepResult result = sweep(u, phi, cfg.t_values, opts);
  std::string modular_method = u.is_piecewise() ? "closed_form" : "quadrature";
  if (cfg.expected_modular) {
    result.modular_value = *cfg.expected_modular;
    modular_method = "override";
  }

  if (verify) {
    const Tolerances& tol = cfg.tolerances;
    if (contains(checks, "identity")) {
      add_verdict(result, "identity", check_identity(result, tol.identity));
    }
    if (contains(checks, "sandwich")) {
      auto s = check_sandwich(result, delta2_constant(phi).best(), tol.sandwich);
      add_verdict(result, "sandwich_lower", std::move(s.lower));
      add_verdict(result, "sandwich_upper", std::move(s.upper));
    }
    if (contains(checks, "universal_upper")) {
      add_verdict(result, "universal_upper",
                  check_universal_upper(result, u, phi, tol.universal));
    }
    if (contains(checks, "compact_bracket")) {
      add_verdict(result, "compact_bracket",
                  check_compact_bracket(result, u.support_radius(), tol.bracket));
    }
    if (contains(checks, "gu_yung")) {
      const SweepResult direct = sweep_direct_power(u, *phi.exponent(), cfg.t_values, opts);
      add_verdict(result, "gu_yung_agreement",
                  check_path_agreement(result, direct, tol.gu_yung_agreement));
      add_verdict(result, "gu_yung_limit", check_identity(result, tol.identity));
    }
  }

  Report report = make_report(std::string(command), cfg.echo, u, phi, result, modular_method);
  std::ostringstream diag;
  if (result.has_gaps()) {
    for (const auto& p : result.points) {
      if (!p.estimate) diag << "estimator failed at t=" << p.t << ": " << p.error << '\n';
    }
    outcome.exit_code = kExitEstimatorFailure;
  } else if (!report.all_pass) {
    for (const auto& v : report.verdicts) {
      if (!v.pass) diag << "verdict " << v.name << " failed: " << v.detail << '\n';
    }
    outcome.exit_code = kExitVerdictFailure;
  }
  for (const auto& p : result.points) {
    if (p.estimate && p.estimate->bias_flagged) {
      diag << "bias bound above tolerance at t=" << p.t << '\n';
    }
  }
  outcome.diagnostics = diag.str();
  outcome.report = std::move(report);
  return outcome;
}

CommandOutcome run_delta2(const RunConfig& cfg) {
  const YoungFunction& phi = *cfg.young;
  const Delta2Estimate est = delta2_constant(phi);
  json doc;
  doc["young_function"] = phi.describe();
  doc["estimate"] = est.estimate;
  doc["estimate_method"] = "grid_max_ratio";
  doc["argmax"] = est.argmax;
  doc["analytic"] = est.analytic ? json(*est.analytic) : json(nullptr);
  doc["delta2"] = est.best();
  CommandOutcome outcome;
  outcome.printed = doc.dump(2) + "\n";
  return outcome;
}

CommandOutcome run_oracle(const RunConfig& cfg) {
  const TestFunction& u = *cfg.test_function;
  const YoungFunction& phi = *cfg.young;
  if (!u.is_piecewise() || u.pieces().pieces() != 1) {
    throw ConfigError("oracle needs an indicator test function");
  }
  const int n = u.dimension();
  const double radius = u.pieces().radii.front();
  const double value = std::abs(u.pieces().values.front());
  if (!(radius > 0.0) || !(value > 0.0)) {
    throw ConfigError("oracle needs a ball of positive radius and a nonzero value");
  }
  const double omega = unit_ball_volume(n);
  const double omega2 = omega * omega;
  json rows = json::array();
  for (double t : cfg.t_values) {
    const FiberRadius rule = FiberRadius::orlicz(phi, t, n);
    const double rho = rule(value);
    const bool valid = rho >= 2.0 * radius;
    json row{{"t", t}, {"phi_t", rule.weight()}, {"fiber_radius", rho}, {"valid", valid}};
    if (valid) {
      row["value"] = 2.0 * omega2 * std::pow(radius, n) * phi(value) -
                     2.0 * rule.weight() * omega2 * std::pow(radius, 2 * n);
    } else {
      row["value"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  json doc;
  doc["dimension"] = n;
  doc["R"] = radius;
  doc["c"] = value;
  doc["young_function"] = phi.describe();
  doc["method"] = "closed_form_indicator";
  doc["rows"] = rows;
  CommandOutcome outcome;
  outcome.printed = doc.dump(2) + "\n";
  return outcome;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::vector<std::string> default_checks(const RunConfig& cfg) {
  std::vector<std::string> checks{"identity", "universal_upper"};
  if (cfg.test_function && std::isfinite(cfg.test_function->support_radius())) {
    checks.push_back("compact_bracket");
  }
  if (cfg.young && cfg.young->family() == YoungFunction::Family::Power) {
    checks.push_back("gu_yung");
  }
  return checks;
}

CommandOutcome execute(std::string_view command, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutcome outcome;
  try {
    if (command != "verify" && command != "sweep" && command != "delta2" &&
        command != "oracle") {
      throw ConfigError("unknown command '" + std::string(command) + "'");
    }
    require_for_command(config, command);
    if (command == "delta2") {
      outcome = run_delta2(config);
    } else if (command == "oracle") {
      outcome = run_oracle(config);
    } else {
      outcome = run_sweep_like(command, config);
    }
  } catch (const ConfigError& e) {
    outcome = {};
    outcome.exit_code = kExitConfigError;
    outcome.diagnostics = std::string("config error: ") + e.what() + "\n";
  } catch (const DomainError& e) {
    outcome = {};
    outcome.exit_code = kExitConfigError;
    outcome.diagnostics = std::string("invalid input: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    outcome = {};
    outcome.exit_code = kExitEstimatorFailure;
    outcome.diagnostics = std::string("estimator failure: ") + e.what() + "\n";
  }
  outcome.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

int run_cli(std::string_view command, const CliOptions& options, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(options.config);
    if (options.seed) override_seed(cfg, *options.seed);
    if (options.threads) {
      if (*options.threads == 0) throw ConfigError("--threads must be >= 1");
      cfg.threads = *options.threads;
    }
    if (options.out_dir) cfg.output_dir = options.out_dir->string();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const CommandOutcome outcome = execute(command, cfg);
  err << outcome.diagnostics;
  if (!outcome.printed.empty()) out << outcome.printed;
  if (!outcome.report) return outcome.exit_code;

  try {
    const std::filesystem::path dir = cfg.output_dir;
    std::filesystem::create_directories(dir);
    const std::string stem = cfg.output_stem.empty() ? std::string(command) : cfg.output_stem;
    const auto report_path = dir / (stem + ".report.json");
    write_file(report_path, outcome.report->to_json());
    write_file(dir / (stem + ".table.csv"), outcome.report->to_csv());
    json timing{{"wall_clock_seconds", outcome.wall_clock_seconds},
                {"threads", cfg.threads},
                {"tool_version", tool_version()}};
    write_file(dir / (stem + ".timing.json"), timing.dump(2) + "\n");
    out << report_path.string() << '\n';
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return outcome.exit_code;
}

}  // namespace orlicz
