#include "orlicz/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "orlicz/errors.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/random.hpp"

namespace orlicz {
namespace {

using RuleFactory = std::function<FiberRadius(double t)>;

std::string format_detail(const char* label, double lhs, const char* op, double rhs) {
  std::ostringstream out;
  out.precision(12);
  out << label << ": " << lhs << ' ' << op << ' ' << rhs;
  return out.str();
}

SweepResult sweep_impl(const TestFunction& u, const YoungFunction& phi,
                       std::span<const double> t_values, const SweepOptions& options,
                       const RuleFactory& make_rule) {
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    if (!(t_values[i] > 0.0) || !std::isfinite(t_values[i])) {
      throw DomainError("sweep levels must be positive and finite");
    }
    if (i > 0 && !(t_values[i] < t_values[i - 1])) {
      throw DomainError("sweep levels must be strictly decreasing");
    }
  }

  SweepResult result;
  result.dimension = u.dimension();
  result.points.resize(t_values.size());
  result.modular_value = modular(u, phi, options.modular_tol);

  auto run_point = [&](std::size_t k, unsigned inner_threads) {
    SweepPoint& point = result.points[k];
    point.t = t_values[k];
    try {
      const FiberRadius rule = make_rule(point.t);
      point.phi_t = rule.weight();
      point.affine_regime = certified_affine_regime(u, rule);
      LevelSetQuery query{u, phi, point.t, options.method, options.tol, options.mc};
      query.mc.seed = derive_seed(options.mc.seed, {k});
      query.mc.threads = inner_threads;
      point.estimate = phi_weighted(query, rule);
    } catch (const std::exception& e) {
      point.estimate.reset();
      point.error = e.what();
    }
  };

  if (options.method == Method::ExactPiecewise) {
    // Deterministic estimator: parallelise over grid points.
    parallel_for(t_values.size(), options.mc.threads,
                 [&](std::size_t k) { run_point(k, 1); });
  } else {
    for (std::size_t k = 0; k < t_values.size(); ++k) run_point(k, options.mc.threads);
  }

  refresh(result, options.fit_points);
  return result;
}

}  // namespace

std::vector<double> make_t_grid(double t_max, double t_min, std::size_t count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    throw DomainError("t grid needs 0 < t_min < t_max < inf");
  }
  if (count < 2) throw DomainError("t grid needs at least two points");
  const double hi = std::log10(t_max);
  const double lo = std::log10(t_min);
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = std::pow(10.0, hi + (lo - hi) * frac);
  }
  grid.front() = t_max;
  grid.back() = t_min;
  return grid;
}

double SweepResult::target() const {
  return 2.0 * unit_ball_volume(dimension) * modular_value;
}

bool SweepResult::has_gaps() const {
  return std::any_of(points.begin(), points.end(),
                     [](const SweepPoint& p) { return !p.estimate; });
}

double SweepResult::max_std_error() const {
  double worst = 0.0;
  for (const auto& p : points) {
    if (p.estimate) worst = std::max(worst, p.estimate->std_error);
  }
  return worst;
}

std::optional<AffineFit> fit_affine(const std::vector<SweepPoint>& points,
                                    std::size_t fit_points) {
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].estimate) usable.push_back(i);
  }
  std::stable_sort(usable.begin(), usable.end(), [&](std::size_t a, std::size_t b) {
    return points[a].t < points[b].t;
  });

  std::vector<std::size_t> regime;
  std::copy_if(usable.begin(), usable.end(), std::back_inserter(regime),
               [&](std::size_t i) { return points[i].affine_regime; });
  std::vector<std::size_t>& pool = regime.size() >= 2 ? regime : usable;
  if (pool.size() > fit_points) pool.resize(fit_points);
  if (pool.size() < 2) return std::nullopt;

  AffineFit fit;
  fit.indices = pool;
  fit.weighted = std::all_of(pool.begin(), pool.end(), [&](std::size_t i) {
    return points[i].estimate->std_error > 0.0;
  });

  // Normalise Phi(t) so deep grids do not underflow the normal equations.
  double scale = 0.0;
  for (std::size_t i : pool) scale = std::max(scale, points[i].phi_t);
  if (!(scale > 0.0)) return std::nullopt;

  double s0 = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
  std::vector<double> w(pool.size()), x(pool.size()), y(pool.size()), sd(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const auto& est = *points[pool[k]].estimate;
    sd[k] = est.std_error;
    w[k] = fit.weighted ? 1.0 / (sd[k] * sd[k]) : 1.0;
    x[k] = points[pool[k]].phi_t / scale;
    y[k] = est.value;
    s0 += w[k];
    sx += w[k] * x[k];
    sxx += w[k] * x[k] * x[k];
    sy += w[k] * y[k];
    sxy += w[k] * x[k] * y[k];
  }
  const double det = s0 * sxx - sx * sx;
  if (!(det > 0.0)) return std::nullopt;

  fit.intercept = (sxx * sy - sx * sxy) / det;
  const double slope = (s0 * sxy - sx * sy) / det;
  fit.slope = slope / scale;

  // intercept = sum_k l_k y_k, so its variance is sum_k l_k^2 sd_k^2.
  double variance = 0.0;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const double l = w[k] * (sxx - sx * x[k]) / det;
    variance += l * l * sd[k] * sd[k];
    fit.residual = std::max(fit.residual, std::abs(y[k] - fit.intercept - slope * x[k]));
  }
  fit.intercept_std_error = std::sqrt(variance);
  return fit;
}

void refresh(SweepResult& result, std::size_t fit_points) {
  result.fit = fit_affine(result.points, fit_points);
  result.grid_sup = 0.0;
  result.grid_sup_index = 0;
  bool first = true;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& est = result.points[i].estimate;
    if (!est) continue;
    if (first || est->value > result.grid_sup) {
      result.grid_sup = est->value;
      result.grid_sup_index = i;
      first = false;
    }
  }
}

SweepResult sweep(const TestFunction& u, const YoungFunction& phi,
                  std::span<const double> t_values, const SweepOptions& options) {
  const int n = u.dimension();
  return sweep_impl(u, phi, t_values, options,
                    [&](double t) { return FiberRadius::orlicz(phi, t, n); });
}

SweepResult sweep_direct_power(const TestFunction& u, double p,
                               std::span<const double> t_values,
                               const SweepOptions& options) {
  const int n = u.dimension();
  const YoungFunction phi = YoungFunction::power(p);
  return sweep_impl(u, phi, t_values, options,
                    [&](double t) { return FiberRadius::direct_power(p, t, n); });
}

Verdict check_identity(const SweepResult& sweep, double tol) {
  Verdict v;
  if (!sweep.fit) {
    v.detail = "no affine fit available";
    v.margin = -1.0;
    return v;
  }
  const double target = sweep.target();
  const double diff = std::abs(sweep.fit->intercept - target);
  const double allowance = tol * std::abs(target) + 3.0 * sweep.fit->intercept_std_error;
  v.pass = diff <= allowance;
  v.margin = allowance - diff;
  v.detail = format_detail("|intercept - 2 omega_N modular|", diff, "<=", allowance);
  return v;
}

SandwichVerdict check_sandwich(const SweepResult& sweep, double delta2, double tol) {
  SandwichVerdict out;
  const double target = sweep.target();
  const double slack = 3.0 * sweep.max_std_error();

  const double lower = target * (1.0 - tol) - slack;
  out.lower.pass = sweep.grid_sup >= lower;
  out.lower.margin = sweep.grid_sup - lower;
  out.lower.detail = format_detail("grid_sup", sweep.grid_sup, ">=", lower);

  const double upper = target * delta2 * (1.0 + tol) + slack;
  out.upper.pass = sweep.grid_sup <= upper;
  out.upper.margin = upper - sweep.grid_sup;
  out.upper.detail = format_detail("grid_sup", sweep.grid_sup, "<=", upper);
  return out;
}

Verdict check_universal_upper(const SweepResult& sweep, const TestFunction& u,
                              const YoungFunction& phi, double tol) {
  const double bound =
      2.0 * unit_ball_volume(u.dimension()) * modular(u.scaled(2.0), phi, 1e-11);
  Verdict v;
  v.pass = true;
  v.margin = std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (const auto& p : sweep.points) {
    if (!p.estimate) continue;
    const double allowance = bound * (1.0 + tol) + 3.0 * p.estimate->std_error;
    const double margin = allowance - p.estimate->value;
    v.margin = std::min(v.margin, margin);
    if (margin < 0.0) ++violations;
  }
  v.pass = violations == 0;
  if (!std::isfinite(v.margin)) v.margin = bound;
  std::ostringstream out;
  out.precision(12);
  out << "bound 2 omega_N modular(2u) = " << bound << ", violations = " << violations;
  v.detail = out.str();
  return v;
}

Verdict check_compact_bracket(const SweepResult& sweep, double support_radius,
                              double tol) {
  const double omega = unit_ball_volume(sweep.dimension);
  const double target = sweep.target();
  const double geometric = omega * omega * std::pow(support_radius, 2 * sweep.dimension);
  Verdict v;
  v.margin = std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (const auto& p : sweep.points) {
    if (!p.estimate) continue;
    const double allowance = 2.0 * p.phi_t * geometric * (1.0 + tol) +
                             tol * std::abs(target) + 3.0 * p.estimate->std_error;
    const double margin = allowance - std::abs(p.estimate->value - target);
    v.margin = std::min(v.margin, margin);
    if (margin < 0.0) ++violations;
  }
  v.pass = violations == 0;
  if (!std::isfinite(v.margin)) v.margin = 0.0;
  std::ostringstream out;
  out << "bracket violations = " << violations;
  v.detail = out.str();
  return v;
}

Verdict check_path_agreement(const SweepResult& a, const SweepResult& b, double tol,
                             double* max_relative_difference) {
  std::size_t mismatches = a.points.size() == b.points.size() ? 0 : 1;
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(a.points.size(), b.points.size()); ++k) {
    const auto& x = a.points[k].estimate;
    const auto& y = b.points[k].estimate;
    if (!x || !y || a.points[k].t != b.points[k].t) {
      ++mismatches;
      continue;
    }
    const double scale = std::max(std::abs(x->value), std::abs(y->value));
    const double rel = scale == 0.0 ? 0.0 : std::abs(x->value - y->value) / scale;
    worst = std::max(worst, rel);
    if (rel > tol) ++mismatches;
  }
  if (max_relative_difference) *max_relative_difference = worst;
  Verdict v;
  v.pass = mismatches == 0;
  v.margin = tol - worst;
  v.detail = format_detail("max relative difference", worst, "<=", tol);
  return v;
}

GuYungVerdict gu_yung_specialize(const TestFunction& u, double p,
                                 std::span<const double> t_values,
                                 const SweepOptions& options, double limit_tol,
                                 double agreement_tol) {
  if (!(p >= 1.0)) throw DomainError("Gu-Yung specialisation needs p >= 1");
  GuYungVerdict out;
  out.orlicz = sweep(u, YoungFunction::power(p), t_values, options);
  out.direct = sweep_direct_power(u, p, t_values, options);

  out.agreement = check_path_agreement(out.orlicz, out.direct, agreement_tol,
                                       &out.max_relative_difference);
  out.limit = check_identity(out.orlicz, limit_tol);
  return out;
}

}  // namespace orlicz
