#pragma once

namespace orlicz {

/// Largest supported dimension.
inline constexpr int kMaxDimension = 10;

/// Dimension together with the volume of its unit ball.
struct GeometrySpec {
  int dimension;
  double omega;

  explicit GeometrySpec(int n);

  double ball_volume(double radius) const;
};

/// omega_N = pi^(N/2) / Gamma(N/2 + 1) for 1 <= N <= 10.
double unit_ball_volume(int n);

/// Volume of the part of a radius-r ball at height <= h above its lowest
/// point along some axis, 0 <= h <= 2r. Incomplete-beta route.
double cap_volume(int n, double radius, double height);

/// Same quantity by adaptive quadrature of (1 - s^2)^((N-1)/2). Slower;
/// kept as an independent route and as the fallback for extreme parameters.
double cap_volume_quadrature(int n, double radius, double height);

/// |B(0, r1) ∩ B(d e_1, r2)| in R^N.
double ball_ball_intersection(double distance, double r1, double r2, int n);

/// |B(d e_1, r) ∩ {a_inner <= |y| < a_outer}|. An infinite a_outer selects
/// the complement of B(0, a_inner).
double ball_annulus_intersection(double distance, double r, double a_inner,
                                 double a_outer, int n);

}  // namespace orlicz
