#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splap/analysis.hpp"
#include "splap/errors.hpp"
#include "splap/exact1d.hpp"

using namespace splap;

namespace {

Params make(double p, double gamma, int N) {
  Params P;
  P.p = p;
  P.gamma = gamma;
  P.N = N;
  return P;
}

StripProblem strip(double p, double gamma, int nx, int ny) {
  StripProblem prob;
  prob.params = make(p, gamma, 2);
  prob.nx = nx;
  prob.ny = ny;
  return prob;
}

Eigen::VectorXd vec(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("fit on an exact power law") {
  std::vector<double> x, v;
  for (int k = 0; k < 40; ++k) {
    x.push_back(std::pow(10.0, -4.0 + 0.1 * k));
    v.push_back(3.0 * std::pow(x.back(), 0.7));
  }
  const auto fit = fit_exponent(x, v, 1e-4, 1.0);
  CHECK(fit.exponent == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.rms_residual < 1e-12);
  CHECK(fit.samples == 40);
  CHECK_THROWS_AS(fit_exponent(x, v, 0.5, 1.0), DomainError);
  v[5] = -1.0;
  CHECK_THROWS_AS(fit_exponent(x, v, 1e-4, 1.0), DomainError);
}

TEST_CASE("gradient scan on v0") {
  const auto prob = strip(2.0, 3.0, 8, 128);
  const auto f = make_profile_field(prob, [&](double, double y) { return eval_v0(prob.params, y); });
  const auto scans =
      gradient_blowup_scan(f, 0.5, {Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(0.6, 0.8)});
  REQUIRE(scans.size() == 2);
  // d/dx_2 sqrt(2) x_2^{1/2} = x_2^{-1/2} / sqrt(2)
  for (const auto& s : scans) {
    CHECK(s.fit.exponent == doctest::Approx(prob.params.beta_grad()).epsilon(1e-4));
    CHECK(s.c1 == doctest::Approx(s.direction[1] / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(s.c2 == doctest::Approx(s.direction[1] / std::sqrt(2.0)).epsilon(1e-4));
  }
  CHECK(scans[1].derivative[3] == doctest::Approx(0.8 * scans[0].derivative[3]).epsilon(1e-6));
  CHECK_THROWS_AS(gradient_blowup_scan(f, 0.5, {Eigen::Vector2d(0.99, std::sqrt(1 - 0.99 * 0.99))}),
                  DomainError);
  CHECK_THROWS_AS(gradient_blowup_scan(f, 0.5, {Eigen::Vector2d(0.0, 2.0)}), DomainError);
}

TEST_CASE("blow-up rescaling") {
  const Params P = make(2.0, 3.0, 1);
  CHECK(scaling_coefficient(P, 0.01) == doctest::Approx(1e-3).epsilon(1e-12));
  const auto v0 = [&](double t) { return eval_v0(P, t); };
  const std::vector<double> t{0.1, 1.0, 5.0};
  const auto same = scaling_blowup(v0, 100.0, 0.01, P, t);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(same.w[k] == doctest::Approx(v0(t[k])).epsilon(1e-13));
  CHECK(same.coefficient == doctest::Approx(1e-3));

  // eps^{-beta} v_M(eps t) = v_{eps^{...} M}(t) tends to v0.
  const auto vM = build_vM(P, 1.0);
  const auto u = [&](double s) { return eval_vM(vM, s).v; };
  double prev = 1e300;
  for (double eps : {0.1, 0.01, 0.001}) {
    const auto w = scaling_blowup(u, 100.0, eps, P, {5.0});
    const double gap = std::abs(w.w[0] - v0(5.0));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-2);
  CHECK_THROWS_AS(scaling_blowup(u, 100.0, 10.0, P, {20.0}), RangeError);
}

TEST_CASE("rescaled strip solution is a solution of the rescaled problem") {
  auto prob = strip(2.0, 3.0, 4, 32);
  prob.params.g = Perturbation::constant(0.5);
  prob.top.kind = TopBoundary::Kind::DirichletConst;
  prob.top.value = 1.5;
  const Field2D f = solve(prob);
  const Field2D w = scaling_blowup(f, 0.1);
  CHECK(w.problem.height == doctest::Approx(10.0));
  CHECK(w.problem.params.g.value(1.0) == doctest::Approx(0.5 * std::pow(0.1, 1.5)));
  CHECK(w.problem.top.value == doctest::Approx(1.5 / std::sqrt(0.1)));
  CHECK(residual(f) <= prob.solver.rtol);
  CHECK(residual(w) <= 10.0 * prob.solver.rtol);
  auto tab = f;
  tab.problem.params.g = Perturbation::tabulated({0.0, 1.0}, {1.0, 0.0});
  CHECK_THROWS_AS(scaling_blowup(tab, 0.1), DomainError);
}

TEST_CASE("Kelvin transform") {
  const Params P = make(2.0, 3.0, 2);
  const PointFunction u = [](const Eigen::VectorXd& x) { return x[0] + 2.0 * x[1] * x[1]; };
  const auto Ku = kelvin_transform(u, P);
  const auto KKu = kelvin_transform(Ku, P);
  for (const auto& x : {vec(0.3, 0.7), vec(-2.0, 1.0), vec(5.0, 0.1)}) {
    CHECK(KKu(x) == doctest::Approx(u(x)).epsilon(1e-14));
    CHECK(Ku(x) == doctest::Approx(u(x / x.squaredNorm())));
  }
  CHECK_THROWS_AS(kelvin_transform(u, make(3.0, 3.0, 2)), DomainError);
  CHECK_THROWS_AS(kelvin_transform(u, P, {vec(0.0, 0.0)}), DomainError);

  // -Delta |x|^2 = -4 in the plane.
  const PointFunction r2 = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  CHECK(p_laplacian(r2, 2.0, vec(0.4, 0.9)) == doctest::Approx(-4.0).epsilon(1e-8));

  const auto pts = annulus_grid(2, 0.5, 2.0, 0.3, 2.8, 6, 6);
  CHECK(pts.size() == 36);
  for (const auto& x : pts) CHECK(x.norm() >= 0.5 - 1e-15);
  const PointFunction harmonic = [](const Eigen::VectorXd& x) { return x[0] * x[0] - x[1] * x[1]; };
  CHECK(kelvin_residual(harmonic, P, pts, false) < 1e-6);
  CHECK(kelvin_residual(kelvin_transform(harmonic, P), P, pts, false) < 1e-6);
  // v0(x_2) solves -Delta u = u^{-3}; its transform carries the weight |x|^{-4}.
  const PointFunction v0 = [&](const Eigen::VectorXd& x) { return eval_v0(P, x[1]); };
  CHECK(kelvin_residual(kelvin_transform(v0, P), P, pts, true) < 1e-5);
  CHECK(kelvin_residual(kelvin_transform(v0, P), P, pts, false) > 1e-2);
}

TEST_CASE("inequality constants against a dense sweep") {
  const double p = 3.0;
  // Both sides are homogeneous of degree p, so |xi| = 1 >= |xi'| covers all pairs.
  double lo = 1e300, hi = 0.0;
  const Eigen::VectorXd e = vec(1.0, 0.0);
  const int n = 1500;
  for (int a = 0; a <= n; ++a) {
    const double r = static_cast<double>(a) / n;
    for (int b = 0; b <= n; ++b) {
      const double th = M_PI * b / n;
      const Eigen::VectorXd x2 = vec(r * std::cos(th), r * std::sin(th));
      const double l = ineq_lower_ratio(e, x2, p), u = ineq_upper_ratio(e, x2, p);
      if (std::isnan(l)) continue;
      lo = std::min(lo, l);
      hi = std::max(hi, u);
    }
  }
  const auto c = estimate_ineq_constants(p, 2, 20000, 11);
  CHECK(c.C1 == doctest::Approx(lo).epsilon(1e-3));
  CHECK(c.C2 == doctest::Approx(hi).epsilon(1e-3));
  CHECK(c.C1 > 0.0);
  CHECK(c.pairs >= 20000);
  CHECK(count_ineq_violations(p, 2, c, 20000, 12) == 0);
  auto tight = c;
  tight.C1 *= 1.5;
  CHECK(count_ineq_violations(p, 2, tight, 20000, 12) > 0);
  CHECK_THROWS_AS(estimate_ineq_constants(p, 2, 100, 1), DomainError);
}

TEST_CASE("collinear pairs for p = 4") {
  const Eigen::VectorXd e = vec(1.0, 0.0);
  CHECK(ineq_lower_ratio(e, -e, 4.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ineq_lower_ratio(e, Eigen::VectorXd::Zero(2), 4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ineq_upper_ratio(e, (1.0 - 1e-7) * e, 4.0) == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(std::isnan(ineq_lower_ratio(e, e, 4.0)));
  const auto c = estimate_ineq_constants(4.0, 3, 10000, 5);
  CHECK(c.C1 <= 0.25 + 1e-12);
  CHECK(c.C2 >= 0.75 - 1e-5);
}

TEST_CASE("difference-quotient scanner against brute force") {
  const auto g = [](double t) { return std::exp(-t) + 0.1 * std::sin(5.0 * t); };
  const double l1 = 0.0, l2 = 2.0, eps = 0.3;
  const int n = 10000;
  std::vector<double> t(n + 1), v(n + 1);
  for (int k = 0; k <= n; ++k) {
    t[k] = l1 + (l2 - l1) * k / n;
    v[k] = g(t[k]);
  }
  double brute = -1e300;
  for (int a = 0; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      if (t[b] - t[a] < eps - 1e-12) continue;
      brute = std::max(brute, (v[b] - v[a]) / (t[b] - t[a]));
    }
  }
  CHECK(decreasing_quotient_sup(g, l1, l2, eps) == doctest::Approx(brute).epsilon(1e-4));
  CHECK(decreasing_quotient_sup([](double s) { return -s; }, 0.0, 1.0, 0.1) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(decreasing_quotient_sup(g, 0.0, 0.2, 0.3), DomainError);
}
