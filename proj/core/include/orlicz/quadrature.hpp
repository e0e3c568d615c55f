#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace orlicz {

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  std::size_t max_panels = 1'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration over [a, b].
///
/// The interval is first cut at every breakpoint inside (a, b); panels are
/// then bisected, largest error first, until the summed error estimate is
/// below max(abs_tol, rel_tol * |value|). Throws ConvergenceError (carrying
/// the partial value) when the panel budget is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> breakpoints = {},
                           const QuadratureOptions& options = {});

}  // namespace orlicz
