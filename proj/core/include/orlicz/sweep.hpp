#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orlicz/level_set.hpp"
#include "orlicz/test_function.hpp"
#include "orlicz/young_function.hpp"

namespace orlicz {

/// Log-spaced, strictly decreasing grid from t_max down to t_min.
std::vector<double> make_t_grid(double t_max, double t_min, std::size_t count);

struct SweepOptions {
  Method method = Method::ExactPiecewise;
  /// Relative quadrature tolerance for estimators.
  double tol = 1e-11;
  /// Relative tolerance for the modular.
  double modular_tol = 1e-11;
  /// samples is the per-t budget; seed is the master seed, from which each
  /// grid point derives its own stream.
  MonteCarloOptions mc{};
  /// Number of smallest-t grid points entering the affine fit.
  std::size_t fit_points = 5;
};

struct SweepPoint {
  double t = 0.0;
  double phi_t = 0.0;
  /// Estimate of Phi(t)|E_t|; empty if the estimator failed.
  std::optional<MeasureEstimate> estimate;
  std::string error;
  /// Certified exact-affine regime (see certified_affine_regime()).
  bool affine_regime = false;
};

/// y = intercept + slope * Phi(t), fitted over `indices`.
struct AffineFit {
  double intercept = 0.0;
  double slope = 0.0;
  /// max |y_i - intercept - slope * Phi(t_i)| over the fitted points.
  double residual = 0.0;
  double intercept_std_error = 0.0;
  std::vector<std::size_t> indices;
  bool weighted = false;
};

struct Verdict {
  bool pass = false;
  /// Distance to the decision boundary; negative on failure.
  double margin = 0.0;
  std::string detail;
};

struct SweepResult {
  int dimension = 1;
  std::vector<SweepPoint> points;
  double modular_value = 0.0;
  std::optional<AffineFit> fit;
  double grid_sup = 0.0;
  std::size_t grid_sup_index = 0;
  std::map<std::string, Verdict> verdicts;

  /// 2 omega_N * modular_value.
  double target() const;
  bool has_gaps() const;
  /// Largest per-t standard error.
  double max_std_error() const;
};

/// Per-t Phi(t)|E_t| estimates for u and Phi, the modular, the affine fit
/// and the grid supremum. Estimator failures leave gaps.
SweepResult sweep(const TestFunction& u, const YoungFunction& phi,
                  std::span<const double> t_values, const SweepOptions& options);

/// Same sweep with the literal p-power condition
/// |u(x) - u(y)|^p / |x - y|^N >= t^p in place of the Orlicz rule.
SweepResult sweep_direct_power(const TestFunction& u, double p,
                               std::span<const double> t_values,
                               const SweepOptions& options);

/// Weighted least squares in Phi(t) over the `fit_points` smallest t
/// (weights 1/std_error^2 when every point has one). Points outside a
/// certified affine regime are dropped when at least two regime points are
/// available. Needs two usable points.
std::optional<AffineFit> fit_affine(const std::vector<SweepPoint>& points,
                                    std::size_t fit_points);
/// Refit, recompute grid_sup, for points that were edited in place.
void refresh(SweepResult& result, std::size_t fit_points);

/// |intercept - target| <= tol * target + 3 * intercept_std_error.
Verdict check_identity(const SweepResult& sweep, double tol);

struct SandwichVerdict {
  Verdict lower;
  Verdict upper;
};

/// target (1 - tol) - 3 s <= grid_sup <= target * delta2 (1 + tol) + 3 s with s
/// the largest per-t std_error. grid_sup only bounds the true supremum from
/// below, so the lower side relies on small-t grid points.
SandwichVerdict check_sandwich(const SweepResult& sweep, double delta2, double tol);

/// Every estimate <= 2 omega_N modular(2u) (1 + tol) + 3 std_error. Holds for
/// any Young function, Delta2 or not.
Verdict check_universal_upper(const SweepResult& sweep, const TestFunction& u,
                              const YoungFunction& phi, double tol);

/// For supp u in B_R, every |estimate - target| <=
/// 2 Phi(t) omega_N^2 R^(2N) + tol * target + 3 std_error.
Verdict check_compact_bracket(const SweepResult& sweep, double support_radius,
                              double tol);

/// Per-t relative agreement of two sweeps over the same grid. A failed point
/// on either side counts as a mismatch.
Verdict check_path_agreement(const SweepResult& a, const SweepResult& b, double tol,
                             double* max_relative_difference = nullptr);

struct GuYungVerdict {
  /// Orlicz and direct power paths agree per t.
  Verdict agreement;
  /// Extrapolated limit matches 2 omega_N int |u|^p.
  Verdict limit;
  double max_relative_difference = 0.0;
  SweepResult orlicz;
  SweepResult direct;
};

/// Specialise to Phi(s) = s^p and compare with the direct p-power level set
/// under identical seeds.
GuYungVerdict gu_yung_specialize(const TestFunction& u, double p,
                                 std::span<const double> t_values,
                                 const SweepOptions& options, double limit_tol,
                                 double agreement_tol = 1e-12);

}  // namespace orlicz
