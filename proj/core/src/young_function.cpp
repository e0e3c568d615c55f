#include "orlicz/young_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlicz/errors.hpp"

namespace orlicz {
namespace {

constexpr double kRelTol = 1e-12;

void require_argument(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw DomainError("Young function argument must be finite and >= 0");
  }
}

void require_exponent(double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw DomainError("Young function exponent must satisfy p >= 1");
  }
}

// (1 + t) ln(1 + t) - t. The direct form cancels catastrophically for small
// t where the value is ~ t^2 / 2, so use the alternating series there:
// sum_{k >= 2} (-1)^k t^k / (k (k - 1)).
double llogl_value(double t) {
  if (t < 0.1) {
    double term = t * t;
    double sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double contribution = term / (static_cast<double>(k) * (k - 1));
      sum += (k % 2 == 0) ? contribution : -contribution;
      if (contribution < 1e-18 * sum) break;
      term *= t;
    }
    return sum;
  }
  return (1.0 + t) * std::log1p(t) - t;
}

}  // namespace

YoungFunction YoungFunction::power(double p) {
  require_exponent(p);
  return YoungFunction(Family::Power, p, {});
}

YoungFunction YoungFunction::power_log(double p) {
  require_exponent(p);
  return YoungFunction(Family::PowerLog, p, {});
}

YoungFunction YoungFunction::llogl() {
  return YoungFunction(Family::LLogL, 1.0, {});
}

YoungFunction YoungFunction::piecewise_linear(std::vector<Breakpoint> vertices) {
  if (vertices.size() < 2) {
    throw DomainError("piecewise-linear Young function needs >= 2 vertices");
  }
  if (vertices.front().t != 0.0 || vertices.front().value != 0.0) {
    throw DomainError("piecewise-linear Young function must start at (0, 0)");
  }
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const auto& [t, v] = vertices[i];
    if (!std::isfinite(t) || !std::isfinite(v)) {
      throw DomainError("piecewise-linear vertices must be finite");
    }
    if (!(t > vertices[i - 1].t)) {
      throw DomainError("piecewise-linear abscissae must be strictly increasing");
    }
    if (v < 0.0) {
      throw DomainError("piecewise-linear values must be nonnegative");
    }
  }
  if (!(vertices[1].value > 0.0)) {
    throw DegenerateFunctionError(
        "Young function vanishes on an interval (0, a]; the global Delta2 "
        "condition would force it to be identically zero");
  }
  return YoungFunction(Family::PiecewiseLinear, 1.0, std::move(vertices));
}

double YoungFunction::piecewise_eval(double t) const {
  const auto it = std::upper_bound(
      vertices_.begin(), vertices_.end(), t,
      [](double value, const Breakpoint& b) { return value < b.t; });
  // Segment [lo, hi]; past the last vertex keep the last slope.
  std::size_t hi = static_cast<std::size_t>(it - vertices_.begin());
  if (hi >= vertices_.size()) hi = vertices_.size() - 1;
  if (hi == 0) hi = 1;
  const Breakpoint& a = vertices_[hi - 1];
  const Breakpoint& b = vertices_[hi];
  const double slope = (b.value - a.value) / (b.t - a.t);
  return a.value + slope * (t - a.t);
}

double YoungFunction::operator()(double t) const {
  require_argument(t);
  if (t == 0.0) return 0.0;
  switch (family_) {
    case Family::Power:
      return std::pow(t, p_);
    case Family::PowerLog:
      return std::pow(t, p_) * std::log1p(t);
    case Family::LLogL:
      return llogl_value(t);
    case Family::PiecewiseLinear:
      return piecewise_eval(t);
  }
  return 0.0;
}

double YoungFunction::log_eval(double t) const {
  require_argument(t);
  if (t == 0.0) return -std::numeric_limits<double>::infinity();
  switch (family_) {
    case Family::Power:
      return p_ * std::log(t);
    case Family::PowerLog:
      return p_ * std::log(t) + std::log(std::log1p(t));
    case Family::LLogL:
      if (t < 1e-100) {
        // t^2/2 * (1 - t/3 + ...) would underflow.
        return 2.0 * std::log(t) - std::log(2.0) + std::log1p(-t / 3.0);
      }
      return std::log(llogl_value(t));
    case Family::PiecewiseLinear:
      return std::log(piecewise_eval(t));
  }
  return 0.0;
}

YoungFunction::Family YoungFunction::family() const noexcept { return family_; }

std::optional<double> YoungFunction::exponent() const noexcept {
  if (family_ == Family::Power || family_ == Family::PowerLog) return p_;
  return std::nullopt;
}

std::optional<double> YoungFunction::analytic_delta2() const {
  switch (family_) {
    case Family::Power:
      return std::exp2(p_);
    case Family::PowerLog:
      // 2^p ln(1 + 2t) / ln(1 + t) decreases from 2^(p+1) at t -> 0.
      return std::exp2(p_ + 1.0);
    case Family::LLogL:
      // Phi(t) ~ t^2 / 2 near the origin, ~ t ln t at infinity.
      return 4.0;
    case Family::PiecewiseLinear:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string YoungFunction::describe() const {
  std::ostringstream out;
  switch (family_) {
    case Family::Power:
      out << "power(p=" << p_ << ")";
      break;
    case Family::PowerLog:
      out << "power_log(p=" << p_ << ")";
      break;
    case Family::LLogL:
      out << "llogl";
      break;
    case Family::PiecewiseLinear:
      out << "piecewise_linear(" << vertices_.size() << " vertices)";
      break;
  }
  return out.str();
}

std::vector<double> default_delta2_grid() {
  constexpr int kPoints = 400;
  std::vector<double> grid(kPoints);
  const double lo = -9.0;
  const double hi = 9.0;
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = std::pow(10.0, lo + (hi - lo) * i / (kPoints - 1));
  }
  return grid;
}

Delta2Estimate delta2_constant(const YoungFunction& phi,
                               std::span<const double> grid) {
  if (grid.empty()) throw DomainError("Delta2 grid is empty");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double t : grid) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw DomainError("Delta2 grid entries must be positive and finite");
    }
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (lo > 1e-6 || hi < 1e6) {
    throw DomainError("Delta2 grid must span at least [1e-6, 1e6]");
  }

  Delta2Estimate result;
  result.analytic = phi.analytic_delta2();
  double best = 0.0;
  for (double t : grid) {
    const double base = phi(t);
    if (!(base > 0.0)) {
      throw DegenerateFunctionError("Young function vanishes at a grid point");
    }
    const double ratio = phi(2.0 * t) / base;
    if (ratio > best) {
      best = ratio;
      result.argmax = t;
    }
  }
  // Convexity with Phi(0) = 0 gives Phi(2t) >= 2 Phi(t).
  result.estimate = std::max(2.0, best);
  return result;
}

Delta2Estimate delta2_constant(const YoungFunction& phi) {
  const auto grid = default_delta2_grid();
  return delta2_constant(phi, grid);
}

YoungCertificate certify_young(const YoungFunction& phi,
                               std::span<const double> grid) {
  YoungCertificate cert;
  cert.zero_at_origin = phi(0.0) == 0.0;

  std::vector<double> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(phi(t));

  cert.monotone = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) {
      throw DomainError("certification grid must be sorted");
    }
    if (values[i - 1] > values[i] * (1.0 + kRelTol)) {
      cert.monotone = false;
      break;
    }
  }

  cert.midpoint_convex = true;
  for (std::size_t i = 0; i < grid.size() && cert.midpoint_convex; ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double mid = phi(0.5 * (grid[i] + grid[j]));
      const double chord = 0.5 * (values[i] + values[j]);
      if (mid > chord * (1.0 + kRelTol)) {
        cert.midpoint_convex = false;
        break;
      }
    }
  }
  return cert;
}

}  // namespace orlicz
