#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "splap/errors.hpp"
#include "splap/exact1d.hpp"

using namespace splap;

namespace {

Params make(double p, double gamma) {
  Params P;
  P.p = p;
  P.gamma = gamma;
  return P;
}

// -(|v'|^{p-2} v')' - v^{-gamma} relative to v^{-gamma}, nested central
// differences with step h t, Richardson-extrapolated.
template <class V>
double ode_residual(const Params& P, const V& v, double t, double rel_step) {
  const auto lhs = [&](double h) {
    const auto flux = [&](double s) {
      const double d = (v(s + 0.5 * h) - v(s - 0.5 * h)) / h;
      return std::pow(std::abs(d), P.p - 2.0) * d;
    };
    return -(flux(t + 0.5 * h) - flux(t - 0.5 * h)) / h;
  };
  const double h = rel_step * t;
  const double l = (4.0 * lhs(0.5 * h) - lhs(h)) / 3.0;
  const double rhs = std::pow(v(t), -P.gamma);
  return std::abs(l - rhs) / rhs;
}

// F_M(v) by s = v x^p and composite Simpson in x.
double oracle_F(const Params& P, double M, double v) {
  const int n = 20000;
  const double p = P.p, g = P.gamma;
  const auto integrand = [&](double x) {
    if (x == 0.0) return 0.0;
    const double s = v * std::pow(x, p);
    return std::pow(M + std::pow(s, 1.0 - g) / (g - 1.0), -1.0 / p) * v * p * std::pow(x, p - 1.0);
  };
  double sum = integrand(0.0) + integrand(1.0);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * integrand(static_cast<double>(k) / n);
  return sum / (3.0 * n);
}

}  // namespace

TEST_CASE("v0 closed form") {
  const Params P = make(2.0, 3.0);
  CHECK(eval_v0(P, 0.0) == 0.0);
  const double a = eval_v0(P, 1.0);
  // a t^{1/2} solves -v'' = v^{-3} iff a^4 = 4.
  CHECK(std::pow(a, 4) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const Params Q = make(3.0, 2.0);
  CHECK(eval_v0(Q, 1.0) == doctest::Approx(std::pow(64.0 / 18.0, 0.25)).epsilon(1e-15));
  for (double t : {1e-4, 0.01, 1.0, 37.0}) {
    CHECK(ode_residual(Q, [&](double s) { return eval_v0(Q, s); }, t, 1e-2) < 1e-8);
    CHECK(ode_residual(P, [&](double s) { return eval_v0(P, s); }, t, 1e-2) < 1e-8);
  }
}

TEST_CASE("v0 coefficient is generic in the scalar type") {
  const long double a = v0_coefficient<long double>(2.0L, 3.0L);
  CHECK(static_cast<double>(a * a) == doctest::Approx(2.0).epsilon(1e-15));
  const float f = v0_profile<float>(2.0f, 3.0f, 4.0f);
  CHECK(f == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("v0 homogeneity holds to rounding") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (const auto& P : {make(2.0, 3.0), make(3.0, 2.0), make(1.5, 4.0)}) {
    for (int k = 0; k < 100; ++k) {
      const double lam = u(rng), t = u(rng);
      const double lhs = std::pow(lam, -P.beta_u()) * eval_v0(P, lam * t);
      CHECK(std::abs(lhs - eval_v0(P, t)) <= 1e-14 * eval_v0(P, t));
    }
  }
}

TEST_CASE("v0 and v_M need gamma > 1") {
  CHECK_THROWS_AS(eval_v0(make(2.0, 1.0), 1.0), NonexistenceError);
  CHECK_THROWS_AS(build_vM(make(2.0, 0.5), 1.0), NonexistenceError);
  CHECK_THROWS_AS(build_vM(make(2.0, 1.0), 0.0), NonexistenceError);
  try {
    build_vM(make(2.0, 0.5), 1.0);
  } catch (const NonexistenceError& e) {
    CHECK(std::string(e.what()).find("nonexistent (gamma<=1)") != std::string::npos);
  }
  CHECK_THROWS_AS(build_vM(make(2.0, 3.0), -1.0), DomainError);
}

TEST_CASE("M = 0 reproduces v0") {
  const Params P = make(2.0, 3.0);
  const auto sol = build_vM(P, 0.0);
  for (std::size_t i = 0; i < sol.size(); i += 17) {
    CHECK(std::abs(sol.v()[i] - eval_v0(P, sol.t()[i])) <= 1e-9 * std::max(1.0, sol.v()[i]));
  }
  CHECK(eval_vM(sol, 4.0).v == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("v_M against an independent quadrature and bisection") {
  for (const auto& P : {make(2.0, 3.0), make(3.0, 2.0)}) {
    const auto sol = build_vM(P, 1.0);
    for (double t : {0.01, 1.0, 7.5}) {
      const double target = quadrature_time_factor(P.p) * t;
      double lo = 0.0, hi = 1.0;
      while (oracle_F(P, 1.0, hi) < target) hi *= 2.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (oracle_F(P, 1.0, mid) < target ? lo : hi) = mid;
      }
      CHECK(std::abs(eval_vM(sol, t).v - 0.5 * (lo + hi)) < 1e-8);
    }
  }
}

TEST_CASE("quadrature_F matches the substitution oracle") {
  const Params P = make(2.0, 3.0);
  for (double v : {1e-3, 0.5, 3.0, 40.0}) {
    CHECK(quadrature_F(P, 1.0, 0.0, v) == doctest::Approx(oracle_F(P, 1.0, v)).epsilon(1e-11));
  }
}

TEST_CASE("energy identity, monotonicity and slope") {
  const Params P = make(2.0, 3.0);
  const auto sol = build_vM(P, 1.0);
  const auto t = sol.t();
  const auto v = sol.v();
  for (std::size_t i = 1; i < sol.size(); ++i) CHECK(v[i] > v[i - 1]);
  for (int k = 1; k <= 20; ++k) {
    const double s = 5.0 * k;
    const auto pt = eval_vM(sol, s);
    REQUIRE_FALSE(pt.v_prime.infinite);
    CHECK(std::abs(energy(P, pt.v, pt.v_prime.value) - 1.0) < 1e-8);
    // The slope from the energy agrees with a difference quotient of v.
    const double h = 1e-3;
    const double fd = (eval_vM(sol, s + std::min(h, 100.0 - s)).v - eval_vM(sol, s - h).v) /
                      (std::min(h, 100.0 - s) + h);
    CHECK(fd == doctest::Approx(pt.v_prime.value).epsilon(1e-5));
    CHECK(pt.v_prime.value > 0.0);
  }
  const auto at0 = eval_vM(sol, 0.0);
  CHECK(at0.v == 0.0);
  CHECK(at0.v_prime.infinite);
  CHECK_THROWS_AS(eval_vM(sol, 100.5), RangeError);
  CHECK_THROWS_AS(eval_vM(sol, -1.0), RangeError);
}

TEST_CASE("slope at t = 50 approaches (M p/(p-1))^{1/p}") {
  const Params P = make(2.0, 3.0);
  const auto sol = build_vM(P, 1.0, 50.0);
  const double h = 1e-2;
  const double q = (eval_vM(sol, 50.0).v - eval_vM(sol, 50.0 - h).v) / h;
  CHECK(std::abs(q - std::sqrt(2.0)) < 1e-3);
  for (double M : {0.25, 1.0, 4.0}) {
    for (double p : {2.0, 3.0}) {
      const Params Q = make(p, 3.0);
      const auto s = build_vM(Q, M, 50.0);
      CHECK(std::abs(eval_vM(s, 50.0).v_prime.value - asymptotic_slope(Q, M)) < 1e-3);
    }
  }
}

TEST_CASE("ODE residual of a quadrature solution") {
  for (const auto& P : {make(2.0, 3.0), make(3.0, 2.0)}) {
    const auto sol = build_vM(P, 1.0);
    // Far out v'' is ~1e-8 of v, so the step stays coarse to keep rounding out.
    for (double t : {0.05, 0.5, 2.0, 20.0, 80.0}) {
      CHECK(ode_residual(P, [&](double s) { return eval_vM(sol, s).v; }, t, 3e-2) < 1e-6);
    }
  }
}

TEST_CASE("scaling family") {
  const Params P = make(2.0, 3.0);
  const auto v1 = build_vM(P, 1.0);
  const auto same = scaling_map(v1, 1.0);
  CHECK(same.M() == 1.0);
  for (double t : {0.0, 0.3, 11.0}) CHECK(eval_vM(same, t).v == doctest::Approx(eval_vM(v1, t).v).epsilon(1e-14));

  const auto two = scaling_map(v1, 2.0);
  CHECK(two.M() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(scaled_energy(P, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  const auto direct = build_vM(P, 2.0, 50.0);
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.5 * k;
    worst = std::max(worst, std::abs(eval_vM(two, t).v - eval_vM(direct, t).v));
    // The mapped table still satisfies the implicit relation.
    CHECK(quadrature_F(P, 2.0, 0.0, eval_vM(two, t).v) ==
          doctest::Approx(quadrature_time_factor(2.0) * t).epsilon(1e-10));
  }
  CHECK(worst < 1e-8);
  CHECK_THROWS_AS(scaling_map(v1, 0.0), DomainError);
  CHECK_THROWS_AS(scaling_map(two, 2.0), DomainError);
}

TEST_CASE("nonexistence diagnostic") {
  const auto half = nonexistence_diagnostic(make(2.0, 0.5));
  CHECK_FALSE(half.exists);
  CHECK(half.verdict.find("nonexistent") != std::string::npos);
  CHECK(half.witness_value > 1e5);
  const auto one = nonexistence_diagnostic(make(2.0, 1.0));
  CHECK_FALSE(one.exists);
  CHECK(one.divergent_term == "ln v");
  CHECK(one.witness_value == doctest::Approx(std::log(one.witness_v)));
  CHECK(nonexistence_diagnostic(make(2.0, 2.0)).exists);
}
