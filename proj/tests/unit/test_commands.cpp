#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oracles.hpp"
#include "orlicz/commands.hpp"

using namespace orlicz;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("orlicz_cmd_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::string_view command, const TempDir& dir, const std::string& config,
        std::optional<unsigned> threads = std::nullopt) {
  const auto cfg = dir.path / "config.json";
  std::ofstream(cfg) << config;
  CliOptions opts;
  opts.config = cfg;
  opts.out_dir = dir.path / "out";
  opts.threads = threads;
  std::ostringstream out, err;
  const int code = run_cli(command, opts, out, err);
  return {code, out.str(), err.str()};
}

const char* kIndicator = R"({
  "dimension": 1,
  "young_function": {"family": "power", "p": 2},
  "test_function": {"function": "indicator", "R": 1, "c": 1},
  "t_grid": {"values": [0.2, 0.1, 0.05, 0.02, 0.01]},
  "seed": 1
})";

std::string indicator_with(const std::string& extra) {
  std::string s = kIndicator;
  s.insert(1, extra + ",");
  return s;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("verify: indicator, Power(2), N = 1 exits 0 with intercept 8") {
  TempDir dir;
  const auto r = run("verify", dir, kIndicator);
  CHECK(r.code == kExitOk);
  const fs::path report = dir.path / "out" / "verify.report.json";
  CHECK(r.out == report.string() + "\n");
  const auto doc = nlohmann::json::parse(read(report));
  CHECK(oracle::rel_close(doc["fit"]["intercept"].get<double>(), 8.0, 1e-12));
  CHECK(doc["all_pass"].get<bool>());
  CHECK(doc["verdicts"].contains("identity"));
  CHECK(doc["verdicts"].contains("gu_yung_agreement"));
  CHECK(read(dir.path / "out" / "verify.table.csv").starts_with(
      "t,phi_t,value,std_error,bias_bound,method\n"));
  CHECK(fs::exists(dir.path / "out" / "verify.timing.json"));
  CHECK(Report::from_json(read(report)).to_json() == read(report));
}

TEST_CASE("verify: corrupted expected modular exits 1") {
  TempDir dir;
  const auto r = run("verify", dir, indicator_with(R"("expected_modular": 2.2)"));
  CHECK(r.code == kExitVerdictFailure);
  CHECK(r.err.find("identity") != std::string::npos);
  const auto doc = nlohmann::json::parse(read(dir.path / "out" / "verify.report.json"));
  CHECK(doc["modular"]["method"] == "override");
  CHECK_FALSE(doc["verdicts"]["identity"]["pass"].get<bool>());
}

TEST_CASE("verify: malformed JSON exits 2") {
  TempDir dir;
  const auto r = run("verify", dir, "{\"dimension\": 1,,}");
  CHECK(r.code == kExitConfigError);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
  CHECK(run("verify", dir, R"({"dimension": 1, "young_function": {"family": "llogl"}})").code ==
        kExitConfigError);
}

TEST_CASE("verify: estimator failure exits 3") {
  TempDir dir;
  const auto r = run("verify", dir,
                     indicator_with(R"("method": "monte_carlo_full", "monte_carlo": {"samples": 50})"));
  CHECK(r.code == kExitEstimatorFailure);
  const auto doc = nlohmann::json::parse(read(dir.path / "out" / "verify.report.json"));
  CHECK(doc["table"][0]["method"] == "failed");
  CHECK(doc["table"][0]["value"].is_null());
}

TEST_CASE("verify: inapplicable check is a config error") {
  TempDir dir;
  const std::string cfg = R"({"dimension": 1, "young_function": {"family": "llogl"},
    "test_function": {"function": "indicator", "R": 1}, "t_grid": {"values": [0.1, 0.05]},
    "seed": 1, "checks": ["gu_yung"]})";
  CHECK(run("verify", dir, cfg).code == kExitConfigError);
}

TEST_CASE("sweep emits table and fit without verdicts") {
  TempDir dir;
  const auto r = run("sweep", dir, kIndicator);
  CHECK(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(read(dir.path / "out" / "sweep.report.json"));
  CHECK(doc["verdicts"].empty());
  CHECK(doc["table"].size() == 5);
  CHECK(oracle::rel_close(doc["fit"]["intercept"].get<double>(), 8.0, 1e-12));
  CHECK(run("sweep", dir, "nope").code == kExitConfigError);
  CHECK(run("sweep", dir,
            indicator_with(R"("method": "monte_carlo_full", "monte_carlo": {"samples": 50})"))
            .code == kExitEstimatorFailure);
}

TEST_CASE("delta2 values") {
  TempDir dir;
  auto value = [&](const std::string& yf) {
    const auto r = run("delta2", dir, R"({"dimension": 1, "young_function": )" + yf + "}");
    REQUIRE(r.code == kExitOk);
    return nlohmann::json::parse(r.out);
  };
  CHECK(value(R"({"family": "power", "p": 3})")["delta2"].get<double>() == 8.0);
  CHECK(value(R"({"family": "power", "p": 1})")["delta2"].get<double>() == 2.0);
  const auto ll = value(R"({"family": "llogl"})");
  CHECK(ll["estimate"].get<double>() == doctest::Approx(4.0).epsilon(1e-6));
  const auto r = run("delta2", dir,
                     R"({"dimension": 1, "young_function": {"family": "piecewise_linear", "breakpoints": [[0,0],[1,0],[2,1]]}})");
  CHECK(r.code == kExitConfigError);
}

TEST_CASE("oracle values and validity") {
  TempDir dir;
  auto rows = [&](int n, const std::string& ts) {
    const auto r = run("oracle", dir,
                       R"({"dimension": )" + std::to_string(n) +
                           R"(, "young_function": {"family": "power", "p": 2}, "test_function": {"function": "indicator", "R": 1, "c": 1}, "t_grid": {"values": )" +
                           ts + "}}");
    REQUIRE(r.code == kExitOk);
    return nlohmann::json::parse(r.out)["rows"];
  };
  const auto one = rows(1, "[0.5]");
  CHECK(one[0]["valid"].get<bool>());
  CHECK(oracle::rel_close(one[0]["value"].get<double>(), 6.0, 1e-14));
  const auto two = rows(2, "[0.6, 0.1]");
  CHECK_FALSE(two[0]["valid"].get<bool>());
  CHECK(two[0]["value"].is_null());
  CHECK(oracle::rel_close(two[1]["value"].get<double>(),
                          2.0 * std::numbers::pi * std::numbers::pi * 0.99, 1e-13));
  const auto r = run("oracle", dir,
                     R"({"dimension": 1, "young_function": {"family": "power", "p": 2}, "test_function": {"function": "gaussian"}, "t_grid": {"values": [0.1]}})");
  CHECK(r.code == kExitConfigError);
}

TEST_CASE("reports are byte-identical across worker counts") {
  const std::string cfg = R"({
    "dimension": 2, "young_function": {"family": "llogl"},
    "test_function": {"function": "piecewise", "radii": [0.5, 1.0], "values": [1.0, -0.4]},
    "t_grid": {"values": [1.0, 0.5]}, "method": "monte_carlo_full",
    "monte_carlo": {"samples": 40000}, "seed": 5, "checks": ["universal_upper"]})";
  std::string first;
  for (unsigned k : {1u, 4u, 8u}) {
    TempDir dir;
    REQUIRE(run("verify", dir, cfg, k).code == kExitOk);
    const std::string text = read(dir.path / "out" / "verify.report.json") +
                             read(dir.path / "out" / "verify.table.csv");
    if (first.empty()) first = text;
    CHECK(text == first);
  }
}

TEST_CASE("unknown command") {
  TempDir dir;
  CHECK(run("frobnicate", dir, kIndicator).code == kExitConfigError);
}

}  // TEST_SUITE
