#include "splap/exact1d.hpp"

#include <algorithm>
#include <sstream>

#include "splap/errors.hpp"
#include "splap/numerics.hpp"

namespace splap {

namespace {

void require_existence(const Params& params) {
  params.validate();
  if (!(params.gamma > 1.0)) {
    throw NonexistenceError("nonexistent (gamma<=1): the half-line problem has no solution");
  }
}

// Solves int_{lo}^{v} psi = target for v >= lo.
double invert_increment(const Params& params, double M, double lo, double target, double hi_hint) {
  if (target <= 0.0) return lo;
  const auto G = [&](double v) { return quadrature_F(params, M, lo, v) - target; };
  const auto dG = [&](double v) { return quadrature_integrand(params, M, v); };
  double hi = hi_hint;
  if (!(hi > lo)) {
    const double psi_lo = quadrature_integrand(params, M, lo);
    hi = psi_lo > 0.0 ? lo + target / psi_lo : std::max(1.0, 2.0 * lo);
  }
  // psi is increasing, so the linear bound above already brackets; doubling
  // covers the lo = 0 start.
  int guard = 0;
  while (G(hi) < 0.0) {
    hi = lo + 2.0 * (hi - lo);
    if (++guard > 2000) throw QuadratureError("could not bracket quadrature root", lo, hi);
  }
  return numerics::safeguarded_newton(G, dG, lo, hi);
}

}  // namespace

double eval_v0(const Params& params, double t) {
  require_existence(params);
  if (t < 0.0) throw DomainError("eval_v0: t must be nonnegative");
  return v0_profile(params.p, params.gamma, t);
}

double eval_v0_prime(const Params& params, double t) {
  require_existence(params);
  if (!(t > 0.0)) {
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    throw DomainError("eval_v0_prime: t must be nonnegative");
  }
  const double b = params.beta_u();
  return v0_coefficient(params.p, params.gamma) * b * std::pow(t, b - 1.0);
}

double quadrature_integrand(const Params& params, double M, double s) {
  if (s <= 0.0) return 0.0;
  // Factored form avoids overflow of s^{1-gamma} near 0.
  const double gm1 = params.gamma - 1.0;
  const double base = M * std::pow(s, gm1) + 1.0 / gm1;
  return std::pow(s, gm1 / params.p) * std::pow(base, -1.0 / params.p);
}

double quadrature_F(const Params& params, double M, double a, double b) {
  if (b <= a) return 0.0;
  const auto psi = [&](double s) { return quadrature_integrand(params, M, s); };
  const double alpha = (params.gamma - 1.0) / params.p;
  if (a == 0.0 || b > 3.0 * a) return numerics::graded_integral(psi, a, b, alpha);
  return numerics::adaptive_integral(psi, a, b);
}

double quadrature_time_factor(double p) { return std::pow(p / (p - 1.0), 1.0 / p); }

QuadratureSolution build_vM(const Params& params, double M, double t_max, std::size_t points) {
  require_existence(params);
  if (!(M >= 0.0)) throw DomainError("build_vM: M must be nonnegative");
  if (!(t_max > 0.0)) throw DomainError("build_vM: t_max must be positive");
  if (points < 4) throw DomainError("build_vM: need at least 4 table points");

  const double K = quadrature_time_factor(params.p);
  std::vector<double> t(points), v(points, 0.0);
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double s = static_cast<double>(i) / last;
    t[i] = t_max * s * s;
  }
  t.back() = t_max;
  for (std::size_t i = 1; i < points; ++i) {
    v[i] = invert_increment(params, M, v[i - 1], K * (t[i] - t[i - 1]), 0.0);
  }
  return QuadratureSolution(params, M, std::move(t), std::move(v));
}

Slope energy_slope(const Params& params, double M, double v) {
  if (v <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  const double gm1 = params.gamma - 1.0;
  const double e = M + std::pow(v, -gm1) / gm1;
  return {std::pow(params.p / (params.p - 1.0) * e, 1.0 / params.p), false};
}

double energy(const Params& params, double v, double v_prime) {
  const double gm1 = params.gamma - 1.0;
  return (params.p - 1.0) / params.p * std::pow(v_prime, params.p) - std::pow(v, -gm1) / gm1;
}

double asymptotic_slope(const Params& params, double M) {
  return std::pow(M * params.p / (params.p - 1.0), 1.0 / params.p);
}

VPoint eval_vM(const QuadratureSolution& sol, double t) {
  const auto ts = sol.t();
  const auto vs = sol.v();
  if (!(t >= 0.0) || t > sol.t_max()) {
    std::ostringstream os;
    os << "eval_vM: t = " << t << " outside tabulated range [0, " << sol.t_max() << "]";
    throw RangeError(os.str());
  }
  if (t == 0.0) return {0.0, {std::numeric_limits<double>::infinity(), true}};
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
  double v = vs[i];
  if (t > ts[i]) {
    const double K = quadrature_time_factor(sol.params().p);
    const double hi = i + 1 < vs.size() ? vs[i + 1] : 0.0;
    v = invert_increment(sol.params(), sol.M(), vs[i], K * (t - ts[i]), hi);
  }
  return {v, energy_slope(sol.params(), sol.M(), v)};
}

double scaled_energy(const Params& params, double lambda) {
  const double e = params.gamma + params.p - 1.0;
  return std::pow(lambda, (params.gamma - 1.0) * params.p / e);
}

QuadratureSolution scaling_map(const QuadratureSolution& sol1, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("scaling_map: lambda must be positive");
  if (sol1.M() != 1.0) throw DomainError("scaling_map: source solution must have M = 1");
  const Params& params = sol1.params();
  const double vscale = std::pow(lambda, -params.beta_u());
  std::vector<double> t(sol1.t().begin(), sol1.t().end());
  std::vector<double> v(sol1.v().begin(), sol1.v().end());
  for (auto& ti : t) ti /= lambda;
  for (auto& vi : v) vi *= vscale;
  return QuadratureSolution(params, scaled_energy(params, lambda), std::move(t), std::move(v));
}

ExistenceReport nonexistence_diagnostic(const Params& params) {
  params.validate();
  ExistenceReport r;
  r.witness_v = 1e12;
  if (params.gamma > 1.0) {
    r.exists = true;
    r.verdict = "exists (gamma>1)";
    r.divergent_term = "none";
    return r;
  }
  r.exists = false;
  r.verdict = "nonexistent (gamma<=1)";
  if (params.gamma == 1.0) {
    // ((p-1)/p)(v')^p + ln v = M cannot hold once v -> infinity.
    r.divergent_term = "ln v";
    r.witness_value = std::log(r.witness_v);
  } else {
    // -v^{1-gamma}/(gamma-1) = v^{1-gamma}/(1-gamma) -> +infinity.
    r.divergent_term = "v^{1-gamma}/(1-gamma)";
    r.witness_value = std::pow(r.witness_v, 1.0 - params.gamma) / (1.0 - params.gamma);
  }
  return r;
}

}  // namespace splap
