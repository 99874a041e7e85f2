#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "splap/errors.hpp"
#include "splap/numerics.hpp"

using namespace splap;
using namespace splap::numerics;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
  const auto rule = gauss_legendre(5);
  CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-15));
  // int_{-1}^{1} x^8 = 2/9
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += rule.weights[k] * std::pow(rule.nodes[k], 8);
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(gauss_panel([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::numbers::e - 1.0).epsilon(1e-15));
}

TEST_CASE("adaptive and graded integrals") {
  const double v = adaptive_integral([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
  // int_0^1 s^{-1/2} = 2
  const double g = graded_integral([](double s) { return 1.0 / std::sqrt(s); }, 0.0, 1.0, -0.5);
  CHECK(g == doctest::Approx(2.0).epsilon(1e-12));
  // int_0^2 s^{1/3} = (3/4) 2^{4/3}
  const double h = graded_integral([](double s) { return std::cbrt(s); }, 0.0, 2.0, 1.0 / 3.0);
  CHECK(h == doctest::Approx(0.75 * std::pow(2.0, 4.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("safeguarded newton finds bracketed roots") {
  const double r = safeguarded_newton([](double x) { return x * x * x - 2.0; },
                                      [](double x) { return 3.0 * x * x; }, 0.0, 3.0);
  CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-15));
  // Zero derivative at the left end forces bisection steps.
  const double s = safeguarded_newton([](double x) { return x * x - 0.25; },
                                      [](double x) { return 2.0 * x; }, 0.0, 1.0);
  CHECK(s == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dopri5 on a harmonic oscillator") {
  using V = Eigen::Vector2d;
  const auto rhs = [](double, const V& y) { return V(y[1], -y[0]); };
  const auto res = dopri5<2>(rhs, 0.0, 10.0, V(1.0, 0.0));
  CHECK(res.y[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-9));
  CHECK(res.y[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-9));

  const auto stop = dopri5<2>(rhs, 0.0, 10.0, V(1.0, 0.0), OdeOptions{},
                              [](double, const V& y) { return y[0] < 0.0; });
  CHECK(stop.stopped);
  CHECK(stop.t > 0.5 * std::numbers::pi);
  CHECK(stop.t < 2.0);
}

TEST_CASE("pchip keeps monotone data monotone") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y = {0.0, 0.1, 0.2, 3.0, 3.01};
  const auto s = HermiteSpline::pchip(x, y);
  double prev = s(0.0);
  for (int k = 1; k <= 400; ++k) {
    const double v = s(0.01 * k);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(s(3.0) == doctest::Approx(3.0));
}

TEST_CASE("lagrange4 reproduces cubics") {
  std::vector<double> v;
  const auto cubic = [](double s) { return 1.0 - 2.0 * s + 0.5 * s * s * s; };
  for (int k = 0; k < 10; ++k) v.push_back(cubic(k));
  for (double s : {0.3, 2.5, 7.9, 8.6}) CHECK(lagrange4_uniform(v, s) == doctest::Approx(cubic(s)).epsilon(1e-13));
}

TEST_CASE("fit_line recovers an exact line") {
  std::vector<double> x = {1, 2, 3, 4, 5}, y;
  for (double t : x) y.push_back(3.0 - 0.5 * t);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.rms < 1e-14);
}
