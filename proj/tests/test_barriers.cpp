#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splap/barriers.hpp"
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

// -(s^{n-1} |w'|^{p-2} w')' / s^{n-1} from profile values only (nested differences).
double radial_plap(const Barrier& b, double s, int n, double h) {
  const double p = b.params().p;
  const auto flux = [&](double r) {
    const double d = (b.profile(r + 0.5 * h) - b.profile(r - 0.5 * h)) / h;
    return std::pow(r, n - 1) * std::pow(std::abs(d), p - 2.0) * d;
  };
  return -(flux(s + 0.5 * h) - flux(s - 0.5 * h)) / (h * std::pow(s, n - 1));
}

const FunctionSpec kBounded{"1/(1+t) - 0.3", [](double t) { return 1.0 / (1.0 + t) - 0.3; }};

}  // namespace

TEST_CASE("names") {
  CHECK(to_string(BarrierKind::WMu) == "WMu");
  CHECK(to_string(BarrierKind::Logarithmic) == "Logarithmic");
  CHECK(to_string(Sense::Sub) == "Sub");
  CHECK(to_string(Sense::Super) == "Super");
}

TEST_CASE("w_mu against an RK4 integration of the first integral") {
  const double p = 2.0, mu = 2.0;
  const Barrier b = build_wmu(p, 1.0, 1.0, mu, kBounded);
  CHECK(b.sense() == Sense::Super);
  CHECK(b.coeff("A") == doctest::Approx(1.7));
  const double k = std::pow(p / (p - 1.0), 1.0 / p);
  const auto rate = [&](double w) { return k * std::pow(std::max(mu - wmu_H(b, w), 0.0), 1.0 / p); };
  double w = 0.0;
  const int steps = 20000;
  const double dt = 2.0 / steps;
  for (int i = 1; i <= steps; ++i) {
    const double k1 = rate(w), k2 = rate(w + 0.5 * dt * k1), k3 = rate(w + 0.5 * dt * k2),
                 k4 = rate(w + dt * k3);
    w += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (i % 4000 == 0) CHECK(b.profile(i * dt) == doctest::Approx(w).epsilon(1e-7));
  }
  // h dominates max(f, 0), is C^1 and equals c / t^2 past rho.
  for (double s : {0.01, 0.5, 0.9, 0.95, 1.0, 1.5, 3.0}) {
    CHECK(wmu_h(b, s) > std::max(kBounded(s), 0.0));
    const double d = 1e-6;
    CHECK((wmu_H(b, s + d) - wmu_H(b, s - d)) / (2 * d) == doctest::Approx(wmu_h(b, s)).epsilon(1e-6));
  }
  CHECK(wmu_h(b, 2.0) == doctest::Approx(0.25));
  const auto rep = validate_barrier(b);
  CHECK(rep.worst_violation <= 1e-5);
  CHECK(rep.domination_margin >= 0.0);
  for (double s : {0.05, 0.4, 1.3}) CHECK(radial_plap(b, s, 1, 1e-3) == doctest::Approx(wmu_h(b, b.profile(s))).epsilon(1e-5));
}

TEST_CASE("w_mu preconditions") {
  CHECK_THROWS_AS(build_wmu(2.0, 1.0, 1.0, 0.5, kBounded), DomainError);
  const FunctionSpec one{"1", [](double) { return 1.0; }};
  // Past 0.9 rho the blend falls to c / rho^2 = 0.5 < f.
  CHECK_THROWS_AS(build_wmu(2.0, 1.0, 0.5, 2.0, one), DominationError);
  const FunctionSpec singular{"t^-3", [](double t) { return std::pow(t, -3.0); }};
  CHECK_THROWS_AS(build_wmu(2.0, 1.0, 1.0, 2.0, singular), DominationError);
  CHECK_THROWS_AS(build_wmu(1.0, 1.0, 1.0, 2.0, kBounded), DomainError);
}

TEST_CASE("eigen-power barrier") {
  const Params P = make(2.0, 3.0, 2);
  const auto pair = solve_eigen(2, 2.0);
  const Barrier b = build_eigen_power(P, 1.0, 0.5, pair);
  double sup = 0.0;
  for (int i = 0; i <= 1000; ++i) sup = std::max(sup, eigen_power_alpha(b, 0.999 * i / 1000.0));
  CHECK(sup == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(b.coeff("sup_alpha") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(validate_barrier(b).worst_violation <= 1e-5);
  CHECK_THROWS_AS(build_eigen_power(P, 1.0, 0.5, solve_eigen(3, 2.0)), ConfigError);
  CHECK_THROWS_AS(b.coeff("missing"), ConfigError);
}

TEST_CASE("linear lower barrier") {
  const Params P = make(2.0, 3.0, 2);
  const auto pair = solve_eigen(2, 2.0);
  const Barrier b = build_linear_lower(P, 1.0, 0.9, pair);
  CHECK(b.coeff("R") == doctest::Approx(std::sqrt(2.0 * pair.lambda1)));
  CHECK(b.profile(0.0) == doctest::Approx(0.9));
  for (double r : {0.3, 1.0, 2.0}) {
    CHECK(radial_plap(b, r, 2, 1e-3) == doctest::Approx(pair.lambda1 / std::pow(b.coeff("R"), 2) * b.profile(r)).epsilon(1e-5));
  }
  CHECK(validate_barrier(b).worst_violation <= 1e-5);
  CHECK(linear_lower_bound(b, 10.0) == 0.9);
  CHECK(linear_lower_bound(b, 0.0) == 0.0);
  CHECK(linear_lower_bound(b, 1.0) == doctest::Approx(b.profile(b.coeff("R") - 1.0)));
  CHECK_THROWS_AS(build_linear_lower(P, 1.0, 5.0, pair), DominationError);
}

TEST_CASE("annulus barriers are p-harmonic with the prescribed boundary values") {
  for (int N : {2, 3}) {
    const Barrier b = build_annulus_barrier(N, 2.0, 1.0, 1.0, 2.0);
    CHECK(b.kind() == (N == 2 ? BarrierKind::Logarithmic : BarrierKind::Fundamental));
    CHECK(b.profile(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(b.profile(4.0)) < 1e-15);
    // Cartesian 5-point / 7-point Laplacian at an off-axis point.
    Eigen::VectorXd x = b.center();
    x[0] += 1.3;
    x[N - 1] -= 1.7;
    const double h = 1e-3;
    double lap = 0.0;
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(N, i) * h;
      lap += (b(x + e) - 2.0 * b(x) + b(x - e)) / (h * h);
    }
    CHECK(std::abs(lap) < 1e-5);
    CHECK(validate_barrier(b).worst_violation <= 1e-5);
  }
  const Barrier b3 = build_annulus_barrier(3, 2.5, 1.0, 1.0);
  CHECK(b3.kind() == BarrierKind::Fundamental);
  CHECK(radial_plap(b3, 2.0, 3, 1e-3) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(build_annulus_barrier(2, 3.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_annulus_barrier(2, 2.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("scaled and shifted v0") {
  const Params P = make(2.0, 3.0, 1);
  const Barrier b = build_v0_shift(P, 2.0, 0.1);
  for (double t : {0.01, 0.3, 0.9}) {
    CHECK(b.profile(t) == doctest::Approx(2.0 * eval_v0(P, t + 0.1)));
    CHECK(radial_plap(b, t, 1, 1e-4 * (t + 0.1)) ==
          doctest::Approx(std::pow(2.0, 4.0) / std::pow(b.profile(t), 3.0)).epsilon(1e-6));
  }
  CHECK(validate_barrier(b).worst_violation <= 1e-5);
  CHECK_THROWS_AS(build_v0_shift(make(2.0, 1.0, 1), 1.0, 0.1), NonexistenceError);
  CHECK_THROWS_AS(build_v0_shift(P, -1.0, 0.1), DomainError);
}

TEST_CASE("a wrong claim is flagged") {
  Profile prof;
  prof.value = [](double s) { return s * s; };
  prof.slope = [](double s) { return 2.0 * s; };
  prof.rhs = [](double) { return -1.0; };  // the true value is -2
  Params P = make(2.0, 3.0, 1);
  const Barrier super(BarrierKind::V0Shift, Sense::Super, P, {}, Region{}, 1,
                      Eigen::VectorXd::Zero(1), prof, FunctionSpec{});
  const auto rep = validate_barrier(super);
  CHECK(rep.worst_violation == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.residual.front() == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(rep.max_abs_residual == doctest::Approx(0.5).epsilon(1e-6));
  const Barrier sub(BarrierKind::V0Shift, Sense::Sub, P, {}, Region{}, 1,
                    Eigen::VectorXd::Zero(1), prof, FunctionSpec{});
  CHECK(validate_barrier(sub).worst_violation < 0.0);
}
