#include "orlicz/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "orlicz/errors.hpp"

#ifndef ORLICZ_VERSION_STRING
#define ORLICZ_VERSION_STRING "0.0.0"
#endif

namespace orlicz {
namespace {

using nlohmann::json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

std::string csv_number(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

}  // namespace

std::string tool_version() { return ORLICZ_VERSION_STRING; }

std::string Report::to_json() const {
  json doc;
  doc["schema_version"] = schema_version;
  doc["command"] = command;
  doc["versions"] = {{"tool", tool_version}, {"schema", schema_version}};
  doc["config"] = config.empty() ? json::object() : json::parse(config);
  doc["dimension"] = dimension;
  doc["young_function"] = young_function;
  doc["test_function"] = test_function;
  doc["modular"] = {{"value", number_or_null(modular_value)},
                    {"method", modular_method},
                    {"target_2_omega_modular", number_or_null(target)}};
  json rows = json::array();
  for (const auto& r : table) {
    rows.push_back({{"t", r.t},
                    {"phi_t", r.phi_t},
                    {"value", number_or_null(r.value)},
                    {"std_error", number_or_null(r.std_error)},
                    {"bias_bound", number_or_null(r.bias_bound)},
                    {"method", r.method},
                    {"affine_regime", r.affine_regime},
                    {"bias_flagged", r.bias_flagged},
                    {"samples", r.samples},
                    {"error", r.error}});
  }
  doc["table"] = rows;
  if (fit) {
    doc["fit"] = {{"method", fit->method},
                  {"intercept", number_or_null(fit->intercept)},
                  {"slope", number_or_null(fit->slope)},
                  {"residual", number_or_null(fit->residual)},
                  {"intercept_std_error", number_or_null(fit->intercept_std_error)},
                  {"weighted", fit->weighted},
                  {"indices", fit->indices}};
  } else {
    doc["fit"] = nullptr;
  }
  doc["grid_sup"] = {{"value", number_or_null(grid_sup)},
                     {"t", number_or_null(grid_sup_t)},
                     {"method", "max_over_grid_lower_bound"}};
  json verdict_doc = json::object();
  for (const auto& v : verdicts) {
    verdict_doc[v.name] = {{"pass", v.pass},
                           {"margin", number_or_null(v.margin)},
                           {"detail", v.detail}};
  }
  doc["verdicts"] = verdict_doc;
  doc["all_pass"] = all_pass;
  return doc.dump(2) + "\n";
}

Report Report::from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    Report r;
    r.schema_version = doc.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw ConfigError("unsupported report schema_version");
    }
    r.command = doc.at("command").get<std::string>();
    r.tool_version = doc.at("versions").at("tool").get<std::string>();
    r.config = doc.at("config").dump();
    if (r.config == "{}") r.config.clear();
    r.dimension = doc.at("dimension").get<int>();
    r.young_function = doc.at("young_function").get<std::string>();
    r.test_function = doc.at("test_function").get<std::string>();
    const auto& mod = doc.at("modular");
    r.modular_value = read_number(mod, "value");
    r.modular_method = mod.at("method").get<std::string>();
    r.target = read_number(mod, "target_2_omega_modular");
    for (const auto& row : doc.at("table")) {
      ReportRow x;
      x.t = read_number(row, "t");
      x.phi_t = read_number(row, "phi_t");
      x.value = read_number(row, "value");
      x.std_error = read_number(row, "std_error");
      x.bias_bound = read_number(row, "bias_bound");
      x.method = row.at("method").get<std::string>();
      x.affine_regime = row.at("affine_regime").get<bool>();
      x.bias_flagged = row.at("bias_flagged").get<bool>();
      x.samples = row.at("samples").get<std::uint64_t>();
      x.error = row.at("error").get<std::string>();
      r.table.push_back(std::move(x));
    }
    if (!doc.at("fit").is_null()) {
      const auto& f = doc.at("fit");
      ReportFit fit;
      fit.method = f.at("method").get<std::string>();
      fit.intercept = read_number(f, "intercept");
      fit.slope = read_number(f, "slope");
      fit.residual = read_number(f, "residual");
      fit.intercept_std_error = read_number(f, "intercept_std_error");
      fit.weighted = f.at("weighted").get<bool>();
      fit.indices = f.at("indices").get<std::vector<std::size_t>>();
      r.fit = std::move(fit);
    }
    r.grid_sup = read_number(doc.at("grid_sup"), "value");
    r.grid_sup_t = read_number(doc.at("grid_sup"), "t");
    for (const auto& [name, v] : doc.at("verdicts").items()) {
      r.verdicts.push_back({name, v.at("pass").get<bool>(), read_number(v, "margin"),
                            v.at("detail").get<std::string>()});
    }
    r.all_pass = doc.at("all_pass").get<bool>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out << kTableHeader << '\n';
  for (const auto& r : table) {
    out << csv_number(r.t) << ',' << csv_number(r.phi_t) << ',' << csv_number(r.value)
        << ',' << csv_number(r.std_error) << ',' << csv_number(r.bias_bound) << ','
        << r.method << '\n';
  }
  return out.str();
}

bool operator==(const Report& a, const Report& b) {
  auto rows_equal = [](const ReportRow& x, const ReportRow& y) {
    return same(x.t, y.t) && same(x.phi_t, y.phi_t) && same(x.value, y.value) &&
           same(x.std_error, y.std_error) && same(x.bias_bound, y.bias_bound) &&
           x.method == y.method && x.affine_regime == y.affine_regime &&
           x.bias_flagged == y.bias_flagged && x.samples == y.samples && x.error == y.error;
  };
  auto fits_equal = [](const std::optional<ReportFit>& x, const std::optional<ReportFit>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->method == y->method && same(x->intercept, y->intercept) &&
           same(x->slope, y->slope) && same(x->residual, y->residual) &&
           same(x->intercept_std_error, y->intercept_std_error) &&
           x->weighted == y->weighted && x->indices == y->indices;
  };
  if (a.table.size() != b.table.size() || a.verdicts.size() != b.verdicts.size()) return false;
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    if (!rows_equal(a.table[i], b.table[i])) return false;
  }
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    const auto& x = a.verdicts[i];
    const auto& y = b.verdicts[i];
    if (x.name != y.name || x.pass != y.pass || !same(x.margin, y.margin) ||
        x.detail != y.detail) {
      return false;
    }
  }
  return a.schema_version == b.schema_version && a.command == b.command &&
         a.tool_version == b.tool_version && a.config == b.config &&
         a.dimension == b.dimension && a.young_function == b.young_function &&
         a.test_function == b.test_function && same(a.modular_value, b.modular_value) &&
         a.modular_method == b.modular_method && same(a.target, b.target) &&
         fits_equal(a.fit, b.fit) && same(a.grid_sup, b.grid_sup) &&
         same(a.grid_sup_t, b.grid_sup_t) && a.all_pass == b.all_pass;
}

Report make_report(std::string command, std::string config_echo, const TestFunction& u,
                   const YoungFunction& phi, const SweepResult& sweep,
                   std::string modular_method) {
  Report r;
  r.command = std::move(command);
  r.tool_version = tool_version();
  r.config = std::move(config_echo);
  r.dimension = sweep.dimension;
  r.young_function = phi.describe();
  r.test_function = u.describe();
  r.modular_value = sweep.modular_value;
  r.modular_method = std::move(modular_method);
  r.target = sweep.target();
  for (const auto& p : sweep.points) {
    ReportRow row;
    row.t = p.t;
    row.phi_t = p.phi_t;
    row.affine_regime = p.affine_regime;
    if (p.estimate) {
      row.value = p.estimate->value;
      row.std_error = p.estimate->std_error;
      row.bias_bound = p.estimate->bias_bound;
      row.method = std::string(method_tag(p.estimate->method));
      row.bias_flagged = p.estimate->bias_flagged;
      row.samples = p.estimate->sample_count;
    } else {
      row.value = row.std_error = row.bias_bound = std::numeric_limits<double>::quiet_NaN();
      row.method = "failed";
      row.error = p.error;
    }
    r.table.push_back(std::move(row));
  }
  if (sweep.fit) {
    ReportFit fit;
    fit.intercept = sweep.fit->intercept;
    fit.slope = sweep.fit->slope;
    fit.residual = sweep.fit->residual;
    fit.intercept_std_error = sweep.fit->intercept_std_error;
    fit.weighted = sweep.fit->weighted;
    fit.indices = sweep.fit->indices;
    r.fit = std::move(fit);
  }
  r.grid_sup = sweep.grid_sup;
  r.grid_sup_t = sweep.points.empty() ? 0.0 : sweep.points[sweep.grid_sup_index].t;
  for (const auto& [name, v] : sweep.verdicts) {
    r.verdicts.push_back({name, v.pass, v.margin, v.detail});
    r.all_pass = r.all_pass && v.pass;
  }
  return r;
}

}  // namespace orlicz
