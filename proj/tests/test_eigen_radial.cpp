#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "splap/eigen_radial.hpp"
#include "splap/errors.hpp"

using namespace splap;

namespace {

// One-dimensional p-Laplacian on (-1, 1): lambda1 = (p - 1) (pi_p / 2)^p with
// pi_p = 2 pi / (p sin(pi / p)).
double interval_eigenvalue(double p) {
  const double pi_p = 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
  return (p - 1.0) * std::pow(pi_p / 2.0, p);
}

constexpr double kJ01 = 2.404825557695773;

}  // namespace

TEST_CASE("closed-form eigenvalues for p = 2") {
  CHECK(solve_eigen(1, 2.0).lambda1 == doctest::Approx(std::pow(std::numbers::pi / 2.0, 2)).epsilon(1e-8));
  CHECK(solve_eigen(2, 2.0).lambda1 == doctest::Approx(kJ01 * kJ01).epsilon(1e-8));
  CHECK(solve_eigen(3, 2.0).lambda1 == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-8));
}

TEST_CASE("one-dimensional eigenvalue for p != 2") {
  for (double p : {1.5, 3.0, 4.0}) {
    CAPTURE(p);
    CHECK(solve_eigen(1, p).lambda1 == doctest::Approx(interval_eigenvalue(p)).epsilon(1e-7));
  }
}

TEST_CASE("eigenfunction shape") {
  const auto pair = solve_eigen(1, 2.0);
  CHECK(pair.r.size() == kEigenSamples);
  CHECK(pair.r.front() == 0.0);
  CHECK(pair.r.back() == 1.0);
  for (double r : {0.0, 0.25, 0.6, 0.99}) {
    CHECK(eval_phi(pair, r) ==
          doctest::Approx(pair.normalization * std::cos(std::numbers::pi * r / 2.0)).epsilon(1e-6));
  }
  CHECK(std::abs(eval_phi(pair, 1.0)) < 1e-9);
  for (int N : {1, 2, 3}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const auto e = solve_eigen(N, p);
      for (std::size_t i = 1; i < e.phi.size(); ++i) CHECK(e.phi[i] <= e.phi[i - 1]);
      for (std::size_t i = 1; i < e.dphi.size(); ++i) CHECK(e.dphi[i] <= 0.0);
      CHECK(e.phi.front() == doctest::Approx(e.normalization));
    }
  }
}

TEST_CASE("radial equation residual") {
  for (int N : {1, 2, 3}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const auto e = solve_eigen(N, p);
      for (double r : {0.1, 0.4, 0.8}) {
        CAPTURE(N);
        CAPTURE(p);
        CAPTURE(r);
        CHECK(radial_residual(e, r) < 1e-5);
      }
    }
  }
}

TEST_CASE("normalization and rescaling") {
  const auto pair = solve_eigen(2, 3.0);
  const auto n = normalized(pair, 4.0);
  CHECK(n.normalization == 4.0);
  CHECK(n.lambda1 == pair.lambda1);
  CHECK(eval_phi(n, 0.3) == doctest::Approx(4.0 / pair.normalization * eval_phi(pair, 0.3)));

  // phi(r / R) solves the equation on B_R with eigenvalue R^{-p} lambda1.
  const double R = 2.5, p = 3.0, lam = std::pow(R, -p) * pair.lambda1;
  for (double r : {0.5, 1.2, 2.0}) {
    const double h = 1e-4;
    const auto flux = [&](double s) {
      const double d = eval_dphi_scaled(pair, R, s);
      return s * std::pow(std::abs(d), p - 2.0) * d;
    };
    const double lhs = -(flux(r + h) - flux(r - h)) / (2.0 * h);
    const double rhs = lam * r * std::pow(eval_phi_scaled(pair, R, r), p - 1.0);
    CHECK(std::abs(lhs - rhs) < 1e-4 * rhs);
  }
  CHECK(eval_phi_scaled(pair, R, R) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(solve_eigen(0, 2.0), DomainError);
  CHECK_THROWS_AS(solve_eigen(2, 1.0), DomainError);
  const auto pair = solve_eigen(2, 2.0);
  CHECK_THROWS_AS(eval_phi(pair, 1.5), RangeError);
  CHECK_THROWS_AS(eval_phi(pair, -0.1), RangeError);
}
