#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

#include "orlicz/test_function.hpp"
#include "orlicz/young_function.hpp"

namespace orlicz {

// Estimators for the 2N-dimensional measure of
//
//   E_t = {(x, y) : x != y, Phi(|u(x) - u(y)|) / |x - y|^N >= Phi(t)}.
//
// For fixed x and a partner value u(y), membership is |x - y| <= rho with
// the fibre radius rho = (Phi(|u(x) - u(y)|) / Phi(t))^(1/N); every
// estimator below works with these fibre balls.

enum class Method { ExactPiecewise, SemiAnalyticCompact, MonteCarloFull };

std::string_view method_tag(Method method) noexcept;
std::optional<Method> parse_method(std::string_view tag) noexcept;

struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  /// Rigorous bound on the bias from discarding the tail of u.
  double bias_bound = 0.0;
  Method method = Method::ExactPiecewise;
  std::uint64_t sample_count = 0;
  /// bias_bound exceeds the requested relative tolerance.
  bool bias_flagged = false;

  MeasureEstimate scaled(double factor) const;
};

/// Fibre-ball radius as a function of the jump |u(x) - u(y)| at level t.
///
/// The Orlicz rule evaluates exp((ln Phi(jump) - ln Phi(t)) / N) so deep
/// sweeps do not overflow. The direct power rule implements the p-power
/// condition |u(x) - u(y)|^p / |x - y|^N >= t^p literally and exists to
/// cross-check the Orlicz path for Phi(s) = s^p.
class FiberRadius {
 public:
  static FiberRadius orlicz(const YoungFunction& phi, double t, int dimension);
  static FiberRadius direct_power(double p, double t, int dimension);

  /// Radius of the closed ball of admissible partners; 0 for a zero jump.
  double operator()(double jump) const;
  /// omega_N * radius(jump)^N without forming the power of the radius.
  double fiber_volume(double jump) const;
  /// weight() * fiber_volume(jump) = omega_N Phi(jump), formed directly.
  double weighted_fiber_volume(double jump) const;
  /// Phi(t) for the Orlicz rule, t^p for the direct rule.
  double weight() const noexcept { return weight_; }
  double level() const noexcept { return t_; }
  int dimension() const noexcept { return dimension_; }
  /// Young function used for modular-based bounds.
  const YoungFunction& young() const noexcept { return phi_; }

 private:
  FiberRadius(YoungFunction phi, double t, int dimension, bool direct, double p);

  YoungFunction phi_;
  double t_;
  int dimension_;
  bool direct_;
  double p_;
  double omega_;
  double log_weight_;
  double weight_;
};

/// (x, y) in E_t given the jump |u(x) - u(y)| and the distance |x - y|.
/// The diagonal is excluded.
bool in_level_set(double jump, double distance, const FiberRadius& rule);

struct MonteCarloOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Radius S of the ball B_S x B_S that is sampled. NaN selects the support
  /// radius of u, which must then be finite.
  double truncation_radius = std::numeric_limits<double>::quiet_NaN();
  /// bias_bound > bias_tolerance * value marks the estimate as flagged.
  double bias_tolerance = 1e-6;
  /// Relative tolerance for the quadrature parts.
  double quadrature_tol = 1e-11;
};

/// Exact |E_t| for a piecewise-constant radial u: a sum over annulus pairs
/// of  int_{A_i} |A_j ∩ B(x, r_ij)| dx, each by radial quadrature of an
/// exact ball/annulus volume.
MeasureEstimate exact_piecewise(const TestFunction& u, const FiberRadius& rule,
                                double tol = 1e-11);
MeasureEstimate exact_piecewise(const TestFunction& u, const YoungFunction& phi,
                                double t, double tol = 1e-11);

/// |E_t| for compactly supported u: the part with one point outside the
/// support ball by quadrature, the part inside B_S x B_S by plain Monte Carlo.
MeasureEstimate semi_analytic_compact(const TestFunction& u, const FiberRadius& rule,
                                      double tol, std::uint64_t samples,
                                      std::uint64_t seed, unsigned threads = 1);
MeasureEstimate semi_analytic_compact(const TestFunction& u, const YoungFunction& phi,
                                      double t, double tol, std::uint64_t samples,
                                      std::uint64_t seed, unsigned threads = 1);

/// |E_t| of u_S = u chi_{B_S}: outer part by quadrature, inner part by
/// stratified Monte Carlo (annulus pairs for piecewise u). bias_bound is
/// 2 omega_N modular(2 v_S) / Phi(t). Results depend only on
/// (seed, samples), never on the thread count.
MeasureEstimate monte_carlo_full(const TestFunction& u, const FiberRadius& rule,
                                 const MonteCarloOptions& options);
MeasureEstimate monte_carlo_full(const TestFunction& u, const YoungFunction& phi,
                                 double t, const MonteCarloOptions& options);

struct LevelSetQuery {
  TestFunction u;
  YoungFunction phi;
  double t;
  Method method = Method::ExactPiecewise;
  double tol = 1e-11;
  MonteCarloOptions mc{};
};

/// Phi(t) |E_t| by the query's method; std_error and bias_bound are scaled
/// by Phi(t) as well.
MeasureEstimate phi_weighted(const LevelSetQuery& query);
/// Same with an explicit fibre rule (its weight replaces Phi(t)).
MeasureEstimate phi_weighted(const LevelSetQuery& query, const FiberRadius& rule);

/// True when u is piecewise constant with outer radius R and every nonzero
/// jump has fibre radius >= 2R. Then every fibre ball swallows the whole
/// support and Phi(t)|E_t| is exactly affine in Phi(t).
bool certified_affine_regime(const TestFunction& u, const FiberRadius& rule);

// Lower-level pieces, exposed for tests and benchmarks.

struct Annulus {
  double inner;
  double outer;
};

/// 2 int_{B_S} |B(x, rho(x)) \ B_S| dx for u supported in B_S.
double outer_term(const TestFunction& u, const FiberRadius& rule, double support,
                  double tol);

/// int_{A} |B(x, radius) ∩ B| dx for annuli A, B in R^N.
double pair_term(int dimension, Annulus from, Annulus to, double radius, double tol);

struct StratumTally {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  /// |A_x| * |A_y|.
  double volume = 0.0;
  /// The hit indicator is constant on the stratum, so it was not sampled.
  bool certain = false;

  double value() const;
  double std_error() const;
};

/// Uniform sampling of A_x x A_y with the E_t indicator.
StratumTally sample_stratum(const TestFunction& u, const FiberRadius& rule,
                            Annulus x_range, Annulus y_range, std::uint64_t samples,
                            std::uint64_t seed, std::uint64_t stratum_id,
                            unsigned threads = 1);

}  // namespace orlicz
