#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/test_function.hpp"

using namespace orlicz;

namespace {

std::vector<double> random_point(std::mt19937_64& gen, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& c : x) c = u(gen);
  return x;
}

double norm(const std::vector<double>& x) {
  double s = 0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("test_function") {

TEST_CASE("piecewise evaluation uses half-open annuli") {
  const auto u = TestFunction::piecewise(2, {0.5, 1.0}, {3.0, -1.0});
  CHECK(u.radial(0.0) == 3.0);
  CHECK(u.radial(0.5) == -1.0);
  CHECK(u.radial(0.999) == -1.0);
  CHECK(u.radial(1.0) == 0.0);
  const std::vector<double> x{0.3, 0.4};
  CHECK(u(x) == -1.0);
  CHECK(u.support_radius() == 1.0);
  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(u(bad), DomainError);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(TestFunction::piecewise(2, {1.0, 0.5}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(TestFunction::piecewise(2, {1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(TestFunction::indicator(0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(TestFunction::gaussian(1, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(TestFunction::indicator(2, -1.0, 1.0), DomainError);
}

TEST_CASE("gaussian and tent") {
  const auto g = TestFunction::gaussian(3, 2.0, 0.5);
  CHECK(g.radial(0.5) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(std::isinf(g.support_radius()));
  const auto tent = TestFunction::tent(2, 2.0, 3.0);
  CHECK(tent.radial(1.0) == doctest::Approx(1.5));
  CHECK(tent.radial(2.5) == 0.0);
  CHECK(tent.support_radius() == 2.0);
}

TEST_CASE("truncation pieces add back up to u") {
  std::mt19937_64 gen(3);
  const std::vector<TestFunction> fs{
      TestFunction::piecewise(3, {0.4, 0.9, 1.5}, {1.0, -2.0, 0.5}),
      TestFunction::gaussian(3, 1.5, 0.8),
      TestFunction::tent(3, 1.2, 2.0),
  };
  for (const auto& u : fs) {
    for (double R : {0.2, 0.4, 1.0, 2.0}) {
      const auto parts = truncate(u, R);
      for (int i = 0; i < 200; ++i) {
        const auto x = random_point(gen, 3, 1.5);
        CHECK(parts.inner(x) + parts.outer(x) == doctest::Approx(u(x)).epsilon(1e-15));
        if (norm(x) >= R) CHECK(parts.inner(x) == 0.0);
        if (norm(x) < R) CHECK(parts.outer(x) == 0.0);
      }
      // The boundary sphere belongs to the outer part.
      CHECK(parts.inner.radial(R) == 0.0);
      CHECK(parts.outer.radial(R) == u.radial(R));
    }
  }
}

TEST_CASE("modular closed forms") {
  const auto ind = TestFunction::indicator(2, 1.0, 2.0);
  CHECK(oracle::rel_close(modular(ind, YoungFunction::power(2.0)), 4.0 * std::numbers::pi, 1e-14));
  const auto pw = TestFunction::piecewise(3, {0.5, 1.0}, {1.0, -3.0});
  const auto phi = YoungFunction::llogl();
  const double w = oracle::ball_volume(3);
  const double expected = w * 0.125 * phi(1.0) + w * (1.0 - 0.125) * phi(3.0);
  CHECK(oracle::rel_close(modular(pw, phi), expected, 1e-14));
  CHECK(modular(TestFunction::zero(2), phi) == 0.0);
}

TEST_CASE("gaussian modular against independent quadrature") {
  const double s1 = oracle::simpson([](double x) { return std::exp(-x * x); }, -12, 12, 4000);
  const double s2 = oracle::simpson([](double x) { return std::exp(-2 * x * x); }, -12, 12, 4000);
  CHECK(oracle::rel_close(s1, std::sqrt(std::numbers::pi), 1e-12));
  CHECK(oracle::rel_close(s2, std::sqrt(std::numbers::pi / 2), 1e-12));
  const auto g = TestFunction::gaussian(1, 1.0, 1.0);
  CHECK(oracle::rel_close(modular(g, YoungFunction::power(1.0), 1e-11), s1, 1e-10));
  CHECK(oracle::rel_close(modular(g, YoungFunction::power(2.0), 1e-11), s2, 1e-10));
  const auto g3 = TestFunction::gaussian(3, 1.0, 1.0);
  CHECK(oracle::rel_close(modular(g3, YoungFunction::power(2.0), 1e-11),
                          std::pow(std::numbers::pi / 2, 1.5), 1e-10));
  // Non-power Young function on a Gaussian: compare with Simpson in 1D.
  const auto phi = YoungFunction::llogl();
  const double s3 = oracle::simpson([&](double x) { return phi(1.7 * std::exp(-x * x / 0.64)); },
                                    -12, 12, 20000);
  CHECK(oracle::rel_close(modular(TestFunction::gaussian(1, 1.7, 0.8), phi, 1e-11), s3, 1e-9));
}

TEST_CASE("tent modular by radial quadrature") {
  // N = 1, Power(1): area of the tent, c R.
  CHECK(oracle::rel_close(modular(TestFunction::tent(1, 2.0, 3.0), YoungFunction::power(1.0)),
                          6.0, 1e-10));
  // N = 2, Power(2): 2 pi c^2 int_0^R (1 - r/R)^2 r dr = pi c^2 R^2 / 6.
  CHECK(oracle::rel_close(modular(TestFunction::tent(2, 1.0, 1.0), YoungFunction::power(2.0)),
                          std::numbers::pi / 6.0, 1e-10));
}

TEST_CASE("property: tail modular decreases to zero") {
  const auto g = TestFunction::gaussian(2, 1.0, 1.0);
  const auto phi = YoungFunction::power(2.0);
  double previous = modular(g, phi);
  for (double R : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0}) {
    const double tail = modular(truncate(g, R).outer, phi, 1e-9);
    CHECK(tail <= previous);
    previous = tail;
  }
  CHECK(previous < 1e-14);
}

TEST_CASE("scaling") {
  const auto u = TestFunction::piecewise(1, {1.0, 2.0}, {1.0, 2.0});
  const auto v = u.scaled(-3.0);
  CHECK(v.radial(1.5) == -6.0);
  CHECK(oracle::rel_close(modular(v, YoungFunction::power(2.0)),
                          9.0 * modular(u, YoungFunction::power(2.0)), 1e-14));
  const auto g = TestFunction::gaussian(1, 1.0, 1.0).scaled(2.0);
  CHECK(g.radial(0.0) == 2.0);
  CHECK(g.sup_abs_beyond(1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
}

}  // TEST_SUITE
