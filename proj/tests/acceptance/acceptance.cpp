// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "orlicz/commands.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/level_set.hpp"
#include "orlicz/random.hpp"
#include "orlicz/sweep.hpp"

using namespace orlicz;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

const std::vector<double> kIndicatorGrid{0.2, 0.1, 0.05, 0.02, 0.01};

// Criteria 1 and 2 share the nine indicator sweeps.
struct IndicatorRuns {
  std::vector<SweepResult> results;  // N-major, then p
  double seconds = 0.0;
};

IndicatorRuns run_indicators() {
  IndicatorRuns runs;
  const auto start = std::chrono::steady_clock::now();
  for (int n = 1; n <= 3; ++n) {
    for (double p : {1.0, 2.0, 3.0}) {
      runs.results.push_back(sweep(TestFunction::indicator(n, 1.0, 1.0),
                                   YoungFunction::power(p), kIndicatorGrid, SweepOptions{}));
    }
  }
  runs.seconds = seconds_since(start);
  return runs;
}

Outcome criterion_indicator_identity(const IndicatorRuns& runs) {
  Outcome out;
  double worst = 0.0;
  for (const auto& r : runs.results) {
    const double w = oracle::ball_volume(r.dimension);
    const double expected = 2.0 * w * w;
    if (!r.fit) {
      out.pass = false;
      continue;
    }
    worst = std::max(worst, std::abs(r.fit->intercept - expected) / expected);
  }
  out.pass = out.pass && worst <= 1e-9 && runs.seconds < 5.0;
  out.detail = fmt("9 sweeps (N=1..3, p=1..3), max relative intercept error %.2e (tol 1e-9), "
                   "%.2f s (limit 5 s)",
                   worst, runs.seconds);
  return out;
}

Outcome criterion_bracket_tightness(const IndicatorRuns& runs) {
  Outcome out;
  double worst = 0.0;
  int checked = 0, skipped = 0;
  std::size_t k = 0;
  for (int n = 1; n <= 3; ++n) {
    for (double p : {1.0, 2.0, 3.0}) {
      const auto& r = runs.results[k++];
      const double w = oracle::ball_volume(n);
      for (const auto& point : r.points) {
        // rho = (Phi(1) / Phi(t))^(1/N) = t^(-p/N); the identity needs rho >= 2R.
        if (std::pow(point.t, -p / n) < 2.0) {
          ++skipped;
          continue;
        }
        const double phi_t = std::pow(point.t, p);
        const double bracket = 2.0 * phi_t * w * w;
        const double gap = std::abs(point.estimate->value - 2.0 * w * w);
        worst = std::max(worst, std::abs(gap - bracket) / bracket);
        ++checked;
      }
    }
  }
  out.pass = checked > 0 && worst <= 1e-9;
  out.detail = fmt("%d points in the rho >= 2R regime (%d outside skipped), max relative "
                   "deviation from 2 Phi(t) omega^2 R^(2N): %.2e (tol 1e-9)",
                   checked, skipped, worst);
  return out;
}

struct RandomCase {
  std::vector<double> radii;
  std::vector<double> values;
};

RandomCase random_piecewise(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> radius(0.2, 1.5), magnitude(0.2, 2.0), coin(0.0, 1.0);
  RandomCase c;
  const int k = count(gen);
  while (static_cast<int>(c.radii.size()) < k) {
    const double r = radius(gen);
    if (std::none_of(c.radii.begin(), c.radii.end(),
                     [&](double x) { return std::abs(x - r) < 1e-3; })) {
      c.radii.push_back(r);
    }
  }
  std::sort(c.radii.begin(), c.radii.end());
  for (int i = 0; i < k; ++i) c.values.push_back((coin(gen) < 0.5 ? -1.0 : 1.0) * magnitude(gen));
  return c;
}

// Independent modular for piecewise u: sum of shell volumes times Phi.
double modular_piecewise(int n, const RandomCase& c, const std::function<double(double)>& phi) {
  double total = 0.0, inner = 0.0;
  for (std::size_t i = 0; i < c.radii.size(); ++i) {
    total += oracle::ball_volume(n) * (std::pow(c.radii[i], n) - std::pow(inner, n)) *
             phi(std::abs(c.values[i]));
    inner = c.radii[i];
  }
  return total;
}

struct SandwichStats {
  int runs = 0;
  int sandwich_failures = 0;
  int gaps = 0;
  double worst_lower = 0.0;  // most negative relative slack seen
  std::size_t estimates = 0;
  std::size_t universal_violations = 0;
  double seconds = 0.0;
};

SandwichStats run_sandwich() {
  SandwichStats stats;
  const auto start = std::chrono::steady_clock::now();
  const auto grid = make_t_grid(1.0, 1e-12, 25);
  std::mt19937_64 gen(20240611);
  struct Family {
    YoungFunction phi;
    double delta2;
  };
  const std::vector<Family> families{{YoungFunction::power(1.0), 2.0},
                                     {YoungFunction::power(2.0), 4.0},
                                     {YoungFunction::llogl(), 4.0}};
  stats.worst_lower = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 3; ++n) {
    for (const auto& fam : families) {
      auto phi = [&](double s) { return fam.phi(s); };
      for (int i = 0; i < 50; ++i) {
        const RandomCase c = random_piecewise(gen);
        const auto u = TestFunction::piecewise(n, c.radii, c.values);
        const auto r = sweep(u, fam.phi, grid, SweepOptions{});
        ++stats.runs;
        if (r.has_gaps()) ++stats.gaps;
        const double target = 2.0 * oracle::ball_volume(n) * modular_piecewise(n, c, phi);
        const double sigma = r.max_std_error();
        const double lower = target * (1 - 1e-6) - 3 * sigma;
        const double upper = target * fam.delta2 * (1 + 1e-6) + 3 * sigma;
        if (!(r.grid_sup >= lower && r.grid_sup <= upper)) ++stats.sandwich_failures;
        stats.worst_lower = std::min(stats.worst_lower, (r.grid_sup - target) / target);

        const double universal =
            2.0 * oracle::ball_volume(n) *
            modular_piecewise(n, c, [&](double s) { return fam.phi(2.0 * s); });
        for (const auto& p : r.points) {
          if (!p.estimate) continue;
          ++stats.estimates;
          if (p.estimate->value > universal * (1 + 1e-9) + 3 * p.estimate->std_error) {
            ++stats.universal_violations;
          }
        }
      }
    }
  }
  stats.seconds = seconds_since(start);
  return stats;
}

Outcome criterion_sandwich(const SandwichStats& s) {
  Outcome out;
  out.pass = s.sandwich_failures == 0 && s.gaps == 0 && s.runs == 450 && s.seconds < 60.0;
  out.detail = fmt("%d random piecewise u (N=1..3 x Power(1), Power(2), LLogL), %d outside "
                   "[target(1-1e-6) - 3s, Delta2 target(1+1e-6) + 3s], %d with gaps, "
                   "min (grid_sup - target)/target = %.2e, %.1f s (limit 60 s)",
                   s.runs, s.sandwich_failures, s.gaps, s.worst_lower, s.seconds);
  return out;
}

Outcome criterion_universal(const SandwichStats& s) {
  Outcome out;
  out.pass = s.universal_violations == 0 && s.estimates == 450u * 25u;
  out.detail = fmt("%zu per-t estimates checked against 2 omega_N int Phi(2|u|), %zu violations",
                   s.estimates, s.universal_violations);
  return out;
}

Outcome criterion_gu_yung() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const auto u = TestFunction::gaussian(1, 1.0, 1.0);
  const auto grid = make_t_grid(1e-3, 1e-5, 5);
  const std::uint64_t budget = 10'000'000;
  std::ostringstream detail;
  for (double p : {1.0, 2.0}) {
    SweepOptions opts;
    opts.method = Method::MonteCarloFull;
    opts.mc.samples = budget / grid.size();
    opts.mc.seed = 2024 + static_cast<std::uint64_t>(p);
    opts.mc.truncation_radius = 6.0;
    const auto gy = gu_yung_specialize(u, p, grid, opts, 0.01);
    // 2 omega_1 int e^{-p x^2} dx = 4 sqrt(pi / p).
    const double expected = 4.0 * std::sqrt(std::numbers::pi / p);
    const double intercept = gy.orlicz.fit ? gy.orlicz.fit->intercept : NAN;
    const double se = gy.orlicz.fit ? gy.orlicz.fit->intercept_std_error : 0.0;
    const bool limit_ok = std::abs(intercept - expected) <= 0.01 * expected + 3 * se;
    out.pass = out.pass && gy.agreement.pass && limit_ok && !gy.orlicz.has_gaps();
    detail << fmt("p=%g: agreement %.1e (tol 1e-12), limit %.6f vs %.6f (se %.1e); ", p,
                  gy.max_relative_difference, intercept, expected, se);
  }
  const double secs = seconds_since(start);
  out.pass = out.pass && secs < 120.0;
  detail << fmt("10^7 pairs per path and p, %.1f s (limit 120 s)", secs);
  out.detail = detail.str();
  return out;
}

Outcome criterion_cross_validation() {
  Outcome out;
  std::mt19937_64 gen(777);
  std::uniform_real_distribution<double> level(0.3, 2.0);
  const std::vector<YoungFunction> phis{YoungFunction::power(1.0), YoungFunction::power(2.0),
                                        YoungFunction::llogl()};
  int cases = 0, disagreements = 0;
  double worst_z = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 20; ++i) {
      const RandomCase c = random_piecewise(gen);
      const auto u = TestFunction::piecewise(n, c.radii, c.values);
      const auto& phi = phis[i % phis.size()];
      const double t = level(gen);
      MonteCarloOptions opts;
      opts.samples = 200'000;
      opts.seed = derive_seed(99, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i)});
      const auto mc = monte_carlo_full(u, phi, t, opts);
      const auto exact = exact_piecewise(u, phi, t);
      const double diff = std::abs(mc.value - exact.value);
      if (diff > 4 * mc.std_error + 1e-9 * exact.value) ++disagreements;
      if (mc.std_error > 0) worst_z = std::max(worst_z, diff / mc.std_error);
      ++cases;
    }
  }

  // Reported std_error against the spread of 30 independent replicates.
  const auto u = TestFunction::piecewise(2, {0.4, 0.9, 1.3}, {1.2, -0.5, 0.7});
  const auto phi = YoungFunction::power(2.0);
  std::vector<double> values;
  double mean_se = 0.0;
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    MonteCarloOptions opts;
    opts.samples = 100'000;
    opts.seed = derive_seed(4242, {rep});
    const auto mc = monte_carlo_full(u, phi, 1.0, opts);
    values.push_back(mc.value);
    mean_se += mc.std_error / 30.0;
  }
  double mean = 0.0;
  for (double v : values) mean += v / 30.0;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean) / 29.0;
  const double ratio = std::sqrt(var) / mean_se;

  out.pass = disagreements == 0 && cases == 60 && ratio >= 0.5 && ratio <= 2.0;
  out.detail = fmt("%d random cases, %d outside 4 sigma (max |z| = %.2f); 30-replicate "
                   "empirical sd / reported se = %.3f (must lie in [0.5, 2])",
                   cases, disagreements, worst_z, ratio);
  return out;
}

Outcome criterion_geometry() {
  Outcome out;
  const double lens = 2.0 * std::numbers::pi / 3.0 - std::sqrt(3.0) / 2.0;
  const double got = ball_ball_intersection(1.0, 1.0, 1.0, 2);
  const double lens_err = std::abs(got - lens) / lens;
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> radius(0.01, 3.0), dist(0.0, 6.0);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r1 = radius(gen), r2 = radius(gen), d = dist(gen);
    const double expected = oracle::interval_overlap(d, r1, r2);
    const double value = ball_ball_intersection(d, r1, r2, 1);
    if (expected == 0.0) {
      if (value != 0.0) ++failures;
      continue;
    }
    const double rel = std::abs(value - expected) / expected;
    worst = std::max(worst, rel);
    if (rel > 1e-12) ++failures;
  }
  out.pass = lens_err <= 1e-12 && failures == 0;
  out.detail = fmt("planar lens relative error %.1e; 10^4 interval cases, max relative error "
                   "%.1e, %d failures (tol 1e-12)",
                   lens_err, worst, failures);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("orlicz_accept_" + std::to_string(::getpid()));
  fs::create_directories(root);
  const fs::path config = root / "config.json";
  std::ofstream(config) << R"({
    "dimension": 2,
    "young_function": {"family": "power", "p": 2},
    "test_function": {"function": "piecewise", "radii": [0.5, 1.0, 1.4], "values": [1.0, -0.6, 0.3]},
    "t_grid": {"values": [2.0, 1.0, 0.5]},
    "method": "monte_carlo_full",
    "monte_carlo": {"samples": 300000},
    "seed": 12345,
    "checks": ["universal_upper", "compact_bracket"]
  })";
  std::string reference;
  int runs = 0, identical = 0;
  for (unsigned threads : {1u, 4u, 8u}) {
    for (int repeat = 0; repeat < 2; ++repeat) {
      CliOptions opts;
      opts.config = config;
      opts.threads = threads;
      opts.out_dir = root / ("run_" + std::to_string(threads) + "_" + std::to_string(repeat));
      std::ostringstream sink_out, sink_err;
      const int code = run_cli("verify", opts, sink_out, sink_err);
      const std::string bytes = slurp(*opts.out_dir / "verify.report.json") + "\n--\n" +
                                slurp(*opts.out_dir / "verify.table.csv");
      ++runs;
      if (code != kExitOk) out.pass = false;
      if (reference.empty()) reference = bytes;
      if (bytes == reference) ++identical;
    }
  }
  fs::remove_all(root);
  out.pass = out.pass && identical == runs;
  out.detail = fmt("%d verify runs (threads 1, 4, 8, twice each): %d byte-identical to the first",
                   runs, identical);
  return out;
}

}  // namespace

int main() {
  struct Line {
    int id;
    const char* name;
    Outcome outcome;
  };
  std::vector<Line> lines;
  auto report = [&](int id, const char* name, Outcome o) {
    std::printf("[%s] criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str());
    std::fflush(stdout);
    lines.push_back({id, name, std::move(o)});
  };

  const IndicatorRuns indicators = run_indicators();
  report(1, "indicator identity", criterion_indicator_identity(indicators));
  report(2, "bracket tightness", criterion_bracket_tightness(indicators));
  const SandwichStats sandwich = run_sandwich();
  report(3, "sandwich", criterion_sandwich(sandwich));
  report(4, "universal bound", criterion_universal(sandwich));
  report(5, "power-case recovery", criterion_gu_yung());
  report(6, "method cross-validation", criterion_cross_validation());
  report(7, "geometry oracle", criterion_geometry());
  report(8, "determinism", criterion_determinism());

  const auto failed = std::count_if(lines.begin(), lines.end(),
                                    [](const Line& l) { return !l.outcome.pass; });
  std::printf("%zu/%zu criteria passed\n", lines.size() - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
