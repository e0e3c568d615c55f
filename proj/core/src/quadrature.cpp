#include "orlicz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlicz/errors.hpp"

namespace orlicz {
namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

// Boost stores the nonnegative half of the symmetric rules with the centre
// node first; Gauss nodes sit at the even Kronrod indices.
Panel gauss_kronrod_15(const std::function<double(double)>& f, double a,
                       double b) {
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss = boost::math::quadrature::gauss<double, 7>;
  static const auto& nodes = kronrod::abscissa();
  static const auto& kweights = kronrod::weights();
  static const auto& gweights = gauss::weights();

  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(centre);
  double k_sum = kweights[0] * fc;
  double g_sum = gweights[0] * fc;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double dx = half * nodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    k_sum += kweights[i] * pair;
    if (i % 2 == 0) g_sum += gweights[i / 2] * pair;
  }
  const double value = k_sum * half;
  const double error = std::abs((k_sum - g_sum) * half);
  return {a, b, value, error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integration limits must be finite");
  }
  if (a == b) return {};
  const double sign = b > a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> queue;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gauss_kronrod_15(f, cuts[i], cuts[i + 1]);
    total += p.value;
    total_error += p.error;
    queue.push(p);
  }

  auto converged = [&] {
    return total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  };

  std::size_t panels = queue.size();
  while (!converged()) {
    if (panels >= options.max_panels) {
      throw ConvergenceError("adaptive quadrature exhausted its panel budget",
                             sign * total, total_error);
    }
    Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in double precision.
      throw ConvergenceError("adaptive quadrature reached machine resolution",
                             sign * total, total_error);
    }
    queue.pop();
    Panel left = gauss_kronrod_15(f, worst.a, mid);
    Panel right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  // Recompute the sum from the panels to shed accumulated update rounding.
  double value = 0.0;
  double error = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {sign * value, error, panels};
}

}  // namespace orlicz
