#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace orlicz {

/// One vertex (t, Phi(t)) of a piecewise-linear Young function.
struct Breakpoint {
  double t;
  double value;
};

/// A Young function Phi: [0, inf) -> [0, inf) drawn from a closed family.
///
/// Shipped families are strictly positive on (0, inf); the named
/// constructors reject parameters that would make Phi vanish on an interval
/// next to the origin. Instances are immutable and cheap to copy.
class YoungFunction {
 public:
  enum class Family { Power, PowerLog, LLogL, PiecewiseLinear };

  /// t^p, p >= 1.
  static YoungFunction power(double p);
  /// t^p * ln(1 + t), p >= 1.
  static YoungFunction power_log(double p);
  /// (1 + t) ln(1 + t) - t.
  static YoungFunction llogl();
  /// Linear interpolation through the given vertices, extended past the last
  /// vertex with the last slope. The first vertex must be (0, 0) and the
  /// first slope positive. Convexity is *not* enforced here so that
  /// counterexamples can be built; use certify_young() to check it.
  static YoungFunction piecewise_linear(std::vector<Breakpoint> vertices);

  /// Phi(t). Throws DomainError for negative or non-finite t.
  double operator()(double t) const;
  double eval(double t) const { return (*this)(t); }

  /// ln Phi(t) for t > 0, evaluated without forming Phi(t) where that would
  /// under- or overflow. Returns -inf at t = 0.
  double log_eval(double t) const;

  Family family() const noexcept;
  /// Exponent p for Power and PowerLog; nullopt otherwise.
  std::optional<double> exponent() const noexcept;
  const std::vector<Breakpoint>& vertices() const noexcept { return vertices_; }

  /// sup_t Phi(2t)/Phi(t) when a closed form is known.
  std::optional<double> analytic_delta2() const;

  /// Short human-readable tag, e.g. "power(p=2)".
  std::string describe() const;

  friend bool operator==(const YoungFunction&, const YoungFunction&) = default;

 private:
  YoungFunction(Family family, double p, std::vector<Breakpoint> vertices)
      : family_(family), p_(p), vertices_(std::move(vertices)) {}

  double piecewise_eval(double t) const;

  Family family_;
  double p_ = 1.0;
  std::vector<Breakpoint> vertices_;
};

struct Delta2Estimate {
  /// max over the grid of Phi(2t)/Phi(t), clamped below at 2.
  double estimate = 2.0;
  /// Closed-form Delta2(Phi) when known.
  std::optional<double> analytic;
  /// Grid point where the maximum ratio occurred.
  double argmax = 0.0;

  /// The analytic value when available, otherwise the grid estimate.
  double best() const { return analytic.value_or(estimate); }
};

/// 400 log-spaced points on [1e-9, 1e9].
std::vector<double> default_delta2_grid();

/// Estimate Delta2(Phi) = inf{k : Phi(2t) <= k Phi(t) for all t > 0} as the
/// grid maximum of Phi(2t)/Phi(t). The grid must be positive and cover at
/// least [1e-6, 1e6]. Throws DegenerateFunctionError if Phi vanishes on a
/// grid point.
Delta2Estimate delta2_constant(const YoungFunction& phi,
                               std::span<const double> grid);
Delta2Estimate delta2_constant(const YoungFunction& phi);

struct YoungCertificate {
  bool zero_at_origin = false;
  bool monotone = false;
  bool midpoint_convex = false;

  bool all() const { return zero_at_origin && monotone && midpoint_convex; }
};

/// Check Phi(0) = 0, monotonicity and midpoint convexity on a sorted,
/// nonnegative grid with relative tolerance 1e-12. Convexity is checked on
/// every pair of grid points.
YoungCertificate certify_young(const YoungFunction& phi,
                               std::span<const double> grid);

}  // namespace orlicz
