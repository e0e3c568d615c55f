#include "orlicz/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/sweep.hpp"

namespace orlicz {
namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) {
    throw ConfigError(std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

double number(const json& object, const char* key, std::string_view where) {
  if (!object.contains(key)) {
    throw ConfigError(std::string(where) + " is missing '" + key + "'");
  }
  const json& v = object.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string(where) + "." + key + " must be a number");
  }
  return v.get<double>();
}

double number_or(const json& object, const char* key, double fallback,
                 std::string_view where) {
  return object.contains(key) ? number(object, key, where) : fallback;
}

std::uint64_t unsigned_integer(const json& v, std::string_view where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(std::string(where) + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

YoungFunction parse_young(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError("young_function needs a string 'family'");
  }
  const auto family = j.at("family").get<std::string>();
  if (family == "power") {
    reject_unknown(j, "young_function", {"family", "p"});
    return YoungFunction::power(number(j, "p", "young_function"));
  }
  if (family == "power_log") {
    reject_unknown(j, "young_function", {"family", "p"});
    return YoungFunction::power_log(number(j, "p", "young_function"));
  }
  if (family == "llogl") {
    reject_unknown(j, "young_function", {"family"});
    return YoungFunction::llogl();
  }
  if (family == "piecewise_linear") {
    reject_unknown(j, "young_function", {"family", "breakpoints"});
    if (!j.contains("breakpoints") || !j.at("breakpoints").is_array()) {
      throw ConfigError("piecewise_linear needs a 'breakpoints' array");
    }
    std::vector<Breakpoint> vertices;
    for (const auto& pair : j.at("breakpoints")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        throw ConfigError("each breakpoint must be a [t, value] pair");
      }
      vertices.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return YoungFunction::piecewise_linear(std::move(vertices));
  }
  throw ConfigError("unknown Young function family '" + family + "'");
}

std::vector<double> number_array(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ConfigError(std::string(where) + " needs an array '" + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(std::string(where) + "." + key + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

TestFunction parse_test_function(const json& j, int& dimension) {
  if (!j.is_object() || !j.contains("function") || !j.at("function").is_string()) {
    throw ConfigError("test_function needs a string 'function'");
  }
  if (j.contains("N")) {
    const int n = static_cast<int>(unsigned_integer(j.at("N"), "test_function.N"));
    if (dimension != 0 && dimension != n) {
      throw ConfigError("test_function.N disagrees with dimension");
    }
    dimension = n;
  }
  if (dimension == 0) throw ConfigError("dimension is required");
  const auto kind = j.at("function").get<std::string>();
  if (kind == "indicator") {
    reject_unknown(j, "test_function", {"function", "N", "R", "c"});
    return TestFunction::indicator(dimension, number(j, "R", "test_function"),
                                   number_or(j, "c", 1.0, "test_function"));
  }
  if (kind == "piecewise") {
    reject_unknown(j, "test_function", {"function", "N", "radii", "values"});
    return TestFunction::piecewise(dimension, number_array(j, "radii", "test_function"),
                                   number_array(j, "values", "test_function"));
  }
  if (kind == "gaussian") {
    reject_unknown(j, "test_function", {"function", "N", "amplitude", "width"});
    return TestFunction::gaussian(dimension, number_or(j, "amplitude", 1.0, "test_function"),
                                  number_or(j, "width", 1.0, "test_function"));
  }
  if (kind == "tent") {
    reject_unknown(j, "test_function", {"function", "N", "R", "c"});
    return TestFunction::tent(dimension, number_or(j, "R", 1.0, "test_function"),
                              number_or(j, "c", 1.0, "test_function"));
  }
  if (kind == "zero") {
    reject_unknown(j, "test_function", {"function", "N"});
    return TestFunction::zero(dimension);
  }
  throw ConfigError("unknown test function '" + kind + "'");
}

std::vector<double> parse_grid(const json& j) {
  reject_unknown(j, "t_grid", {"t_max", "t_min", "count", "values"});
  if (j.contains("values")) {
    if (j.contains("t_max") || j.contains("t_min") || j.contains("count")) {
      throw ConfigError("t_grid takes either 'values' or 't_max'/'t_min'/'count'");
    }
    auto values = number_array(j, "values", "t_grid");
    if (values.empty()) throw ConfigError("t_grid.values is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0.0) || (i > 0 && !(values[i] < values[i - 1]))) {
        throw ConfigError("t_grid.values must be positive and strictly decreasing");
      }
    }
    return values;
  }
  if (!j.contains("count")) throw ConfigError("t_grid is missing 'count'");
  const auto count = unsigned_integer(j.at("count"), "t_grid.count");
  return make_t_grid(number(j, "t_max", "t_grid"), number(j, "t_min", "t_grid"), count);
}

void parse_tolerances(const json& j, Tolerances& tol) {
  reject_unknown(j, "tolerances",
                 {"quadrature", "identity", "sandwich", "bracket", "universal",
                  "gu_yung_agreement"});
  tol.quadrature = number_or(j, "quadrature", tol.quadrature, "tolerances");
  tol.identity = number_or(j, "identity", tol.identity, "tolerances");
  tol.sandwich = number_or(j, "sandwich", tol.sandwich, "tolerances");
  tol.bracket = number_or(j, "bracket", tol.bracket, "tolerances");
  tol.universal = number_or(j, "universal", tol.universal, "tolerances");
  tol.gu_yung_agreement =
      number_or(j, "gu_yung_agreement", tol.gu_yung_agreement, "tolerances");
  for (double v : {tol.quadrature, tol.identity, tol.sandwich, tol.bracket, tol.universal,
                   tol.gu_yung_agreement}) {
    if (!(v > 0.0 && v < 1.0)) throw ConfigError("tolerances must lie in (0, 1)");
  }
}

RunConfig parse_document(const json& doc) {
  reject_unknown(doc, "config",
                 {"dimension", "young_function", "test_function", "t_grid", "method",
                  "monte_carlo", "seed", "threads", "fit_points", "tolerances", "checks",
                  "expected_modular", "output"});
  RunConfig cfg;
  if (doc.contains("dimension")) {
    cfg.dimension = static_cast<int>(unsigned_integer(doc.at("dimension"), "dimension"));
    if (cfg.dimension < 1 || cfg.dimension > 10) {
      throw ConfigError("dimension must lie in [1, 10]");
    }
  }
  if (doc.contains("young_function")) cfg.young = parse_young(doc.at("young_function"));
  if (doc.contains("test_function")) {
    cfg.test_function = parse_test_function(doc.at("test_function"), cfg.dimension);
  }
  if (doc.contains("t_grid")) cfg.t_values = parse_grid(doc.at("t_grid"));
  if (doc.contains("method")) {
    const auto& m = doc.at("method");
    const auto parsed = m.is_string() ? parse_method(m.get<std::string>()) : std::nullopt;
    if (!parsed) throw ConfigError("unknown method");
    cfg.method = *parsed;
  }
  if (doc.contains("monte_carlo")) {
    const auto& mc = doc.at("monte_carlo");
    reject_unknown(mc, "monte_carlo", {"samples", "truncation_radius", "bias_tolerance"});
    if (mc.contains("samples")) {
      cfg.mc.samples = unsigned_integer(mc.at("samples"), "monte_carlo.samples");
    }
    cfg.mc.truncation_radius =
        number_or(mc, "truncation_radius", cfg.mc.truncation_radius, "monte_carlo");
    cfg.mc.bias_tolerance =
        number_or(mc, "bias_tolerance", cfg.mc.bias_tolerance, "monte_carlo");
  }
  if (doc.contains("seed")) cfg.seed = unsigned_integer(doc.at("seed"), "seed");
  if (doc.contains("threads")) {
    cfg.threads = static_cast<unsigned>(unsigned_integer(doc.at("threads"), "threads"));
    if (cfg.threads == 0) throw ConfigError("threads must be >= 1");
  }
  if (doc.contains("fit_points")) {
    cfg.fit_points = unsigned_integer(doc.at("fit_points"), "fit_points");
    if (cfg.fit_points < 2) throw ConfigError("fit_points must be >= 2");
  }
  if (doc.contains("tolerances")) parse_tolerances(doc.at("tolerances"), cfg.tolerances);
  cfg.mc.quadrature_tol = cfg.tolerances.quadrature;
  if (doc.contains("checks")) {
    const auto& checks = doc.at("checks");
    if (!checks.is_array()) throw ConfigError("checks must be an array");
    for (const auto& c : checks) {
      if (!c.is_string()) throw ConfigError("checks must hold strings");
      const auto name = c.get<std::string>();
      const auto& known = known_checks();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ConfigError("unknown check '" + name + "'");
      }
      cfg.checks.push_back(name);
    }
  }
  if (doc.contains("expected_modular")) {
    cfg.expected_modular = number(doc, "expected_modular", "config");
  }
  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    reject_unknown(out, "output", {"dir", "stem"});
    if (out.contains("dir")) cfg.output_dir = out.at("dir").get<std::string>();
    if (out.contains("stem")) cfg.output_stem = out.at("stem").get<std::string>();
  }

  json echo = doc;
  echo.erase("threads");
  echo.erase("output");
  cfg.echo = echo.dump();
  return cfg;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"identity", "sandwich", "universal_upper",
                                              "compact_bracket", "gu_yung"};
  return names;
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_document(doc);
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void override_seed(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  json echo = config.echo.empty() ? json::object() : json::parse(config.echo);
  echo["seed"] = seed;
  config.echo = echo.dump();
}

void require_for_command(const RunConfig& config, std::string_view command) {
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string(command) + " requires " + what);
  };
  need(config.young.has_value(), "young_function");
  if (command == "delta2") return;
  need(config.test_function.has_value(), "test_function");
  need(!config.t_values.empty(), "t_grid");
  if (command == "oracle") return;
  need(config.seed.has_value(), "seed");
}

}  // namespace orlicz
