#include "orlicz/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/quadrature.hpp"

namespace orlicz {
namespace {

// omega_0 = 1, omega_1 = 2, omega_N = 2 pi / N * omega_{N-2}.
constexpr std::array<double, kMaxDimension + 1> make_unit_volumes() {
  std::array<double, kMaxDimension + 1> v{};
  v[0] = 1.0;
  v[1] = 2.0;
  for (int n = 2; n <= kMaxDimension; ++n) {
    v[n] = 2.0 * std::numbers::pi / n * v[n - 2];
  }
  return v;
}

constexpr auto kUnitVolumes = make_unit_volumes();

void require_dimension(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw DomainError("dimension must lie in [1, 10]");
  }
}

void require_nonnegative(double x, const char* what) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError(std::string(what) + " must be >= 0");
  }
}

// Cap with height h <= r, i.e. the smaller side of the cutting plane.
double minor_cap(int n, double radius, double height) {
  const double x = height * (2.0 * radius - height) / (radius * radius);
  const double a = 0.5 * (n + 1);
  try {
    return 0.5 * kUnitVolumes[n] * std::pow(radius, n) *
           boost::math::ibeta(a, 0.5, std::clamp(x, 0.0, 1.0));
  } catch (const std::exception&) {
    return cap_volume_quadrature(n, radius, height);
  }
}

}  // namespace

GeometrySpec::GeometrySpec(int n) : dimension(n), omega(unit_ball_volume(n)) {}

double GeometrySpec::ball_volume(double radius) const {
  return omega * std::pow(radius, dimension);
}

double unit_ball_volume(int n) {
  require_dimension(n);
  return kUnitVolumes[n];
}

double cap_volume(int n, double radius, double height) {
  require_dimension(n);
  require_nonnegative(radius, "radius");
  require_nonnegative(height, "cap height");
  if (radius == 0.0 || height == 0.0) return 0.0;
  if (height >= 2.0 * radius) return kUnitVolumes[n] * std::pow(radius, n);
  if (height <= radius) return minor_cap(n, radius, height);
  return kUnitVolumes[n] * std::pow(radius, n) -
         minor_cap(n, radius, 2.0 * radius - height);
}

double cap_volume_quadrature(int n, double radius, double height) {
  require_dimension(n);
  require_nonnegative(radius, "radius");
  require_nonnegative(height, "cap height");
  if (radius == 0.0 || height == 0.0) return 0.0;
  height = std::min(height, 2.0 * radius);
  // Slices perpendicular to the axis: omega_{N-1} (r^2 - z^2)^((N-1)/2).
  // Substituting z = r s gives omega_{N-1} r^N (1 - s^2)^((N-1)/2) ds.
  const double lower = 1.0 - height / radius;
  const double exponent = 0.5 * (n - 1);
  auto slice = [exponent](double s) {
    const double w = (1.0 - s) * (1.0 + s);
    return w > 0.0 ? std::pow(w, exponent) : 0.0;
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-14;
  opts.abs_tol = 1e-300;
  const double integral = integrate(slice, lower, 1.0, {}, opts).value;
  return kUnitVolumes[n - 1] * std::pow(radius, n) * integral;
}

double ball_ball_intersection(double distance, double r1, double r2, int n) {
  require_dimension(n);
  require_nonnegative(distance, "distance");
  require_nonnegative(r1, "radius");
  require_nonnegative(r2, "radius");
  if (std::isinf(r1) && std::isinf(r2)) {
    throw DomainError("at least one radius must be finite");
  }
  const double small = std::min(r1, r2);
  const double large = std::max(r1, r2);
  if (small == 0.0 || distance >= r1 + r2) return 0.0;
  if (distance + small <= large) {
    return kUnitVolumes[n] * std::pow(small, n);
  }
  // Lens = two caps cut by the radical plane. Heights written in factored
  // form so that thin lenses do not cancel:
  //   h1 = (r1 + r2 - d)(r2 - r1 + d) / 2d,  h2 = (r1 + r2 - d)(r1 - r2 + d) / 2d.
  const double gap = r1 + r2 - distance;
  const double h1 = gap * (r2 - r1 + distance) / (2.0 * distance);
  const double h2 = gap * (r1 - r2 + distance) / (2.0 * distance);
  return cap_volume(n, r1, h1) + cap_volume(n, r2, h2);
}

double ball_annulus_intersection(double distance, double r, double a_inner,
                                 double a_outer, int n) {
  require_dimension(n);
  require_nonnegative(a_inner, "inner radius");
  if (std::isnan(a_outer) || !(a_outer > a_inner)) {
    throw DomainError("annulus needs 0 <= a_inner < a_outer");
  }
  const double hole = ball_ball_intersection(distance, r, a_inner, n);
  if (std::isinf(a_outer)) {
    return std::max(0.0, kUnitVolumes[n] * std::pow(r, n) - hole);
  }
  return std::max(0.0, ball_ball_intersection(distance, r, a_outer, n) - hole);
}

}  // namespace orlicz
