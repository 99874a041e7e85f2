#include "splap/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <tuple>

#include "splap/analysis.hpp"
#include "splap/barriers.hpp"
#include "splap/cli.hpp"
#include "splap/eigen_radial.hpp"
#include "splap/errors.hpp"
#include "splap/exact1d.hpp"
#include "splap/pde_strip.hpp"

namespace splap::acceptance {

bool Check::pass() const {
  switch (relation) {
    case Relation::Near:
      return std::abs(measured - target) <= tolerance;
    case Relation::AtMost:
      return measured <= target + tolerance;
    case Relation::AtLeast:
      return measured >= target - tolerance;
    case Relation::StrictlyBelow:
      return measured < target;
  }
  return false;
}

double Check::severity() const {
  if (std::isnan(measured)) return std::numeric_limits<double>::infinity();
  double excess = 0.0;
  switch (relation) {
    case Relation::Near:
      excess = std::abs(measured - target);
      break;
    case Relation::AtMost:
      excess = measured - target;
      break;
    case Relation::AtLeast:
      excess = target - measured;
      break;
    case Relation::StrictlyBelow:
      return measured < target ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (tolerance > 0.0) return excess / tolerance;
  return excess > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

const Check* CriterionResult::decisive() const {
  const Check* worst = nullptr;
  for (const auto& c : checks) {
    if (!c.pass()) return &c;
    if (!worst || c.severity() > worst->severity()) worst = &c;
  }
  return worst;
}

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list = {
      {1, "closed-form power profile"},
      {2, "quadrature family energy and identity"},
      {3, "scaling family"},
      {4, "asymptotic slope"},
      {5, "nonexistence for gamma <= 1"},
      {6, "first eigenvalues"},
      {7, "barrier validity"},
      {8, "strip solver against quadrature profile"},
      {9, "monotonicity in x_N"},
      {10, "boundary exponents"},
      {11, "reflection and sliding"},
      {12, "Kelvin transform p = N = 2"},
      {13, "elementary inequalities"},
      {14, "difference-quotient scanner"},
  };
  return list;
}

namespace {

Params make_params(double p, double gamma, int N = 1) {
  Params P;
  P.p = p;
  P.gamma = gamma;
  P.N = N;
  return P;
}

std::string tag(double p, double gamma) {
  std::ostringstream os;
  os << "p=" << p << ",gamma=" << gamma;
  return os.str();
}

// -(|v'|^{p-2} v')' - v^{-gamma} by nested centred differences, relative to v^{-gamma}.
double v0_ode_residual(const Params& P, double t) {
  const double h = 2e-4 * t;
  const auto slope = [&](double s) { return (eval_v0(P, s + 0.5 * h) - eval_v0(P, s - 0.5 * h)) / h; };
  const auto flux = [&](double s) {
    const double d = slope(s);
    return std::pow(std::abs(d), P.p - 2.0) * d;
  };
  const double lhs = -(flux(t + 0.5 * h) - flux(t - 0.5 * h)) / h;
  const double rhs = std::pow(eval_v0(P, t), -P.gamma);
  return std::abs(lhs - rhs) / rhs;
}

// Smallest eigenvalue of -phi'' on (-1, 1) with Dirichlet ends: second-order
// differences, inverse iteration with the Thomas algorithm, Richardson in h.
double fd_eigenvalue_1d(int n) {
  const auto estimate = [](int m) {
    const double h = 2.0 / (m + 1);
    const double diag = 2.0 / (h * h), off = -1.0 / (h * h);
    std::vector<double> x(static_cast<std::size_t>(m), 1.0), c(static_cast<std::size_t>(m)),
        d(static_cast<std::size_t>(m));
    double lambda = 0.0;
    for (int it = 0; it < 60; ++it) {
      c[0] = off / diag;
      d[0] = x[0] / diag;
      for (int k = 1; k < m; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double denom = diag - off * c[uk - 1];
        c[uk] = off / denom;
        d[uk] = (x[uk] - off * d[uk - 1]) / denom;
      }
      std::vector<double> y(static_cast<std::size_t>(m));
      y.back() = d.back();
      for (int k = m - 2; k >= 0; --k) {
        const auto uk = static_cast<std::size_t>(k);
        y[uk] = d[uk] - c[uk] * y[uk + 1];
      }
      double xy = 0.0, yy = 0.0;
      for (int k = 0; k < m; ++k) {
        xy += x[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k)];
        yy += y[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k)];
      }
      lambda = xy / yy;
      const double norm = std::sqrt(yy);
      for (int k = 0; k < m; ++k) x[static_cast<std::size_t>(k)] = y[static_cast<std::size_t>(k)] / norm;
    }
    return lambda;
  };
  const double coarse = estimate(n);
  const double fine = estimate(2 * n + 1);
  return (4.0 * fine - coarse) / 3.0;
}

// First positive zero of J0 squared, from its power series.
double bessel_j0_zero_squared() {
  const auto j0 = [](double x) {
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 60; ++k) {
      term *= -q / (static_cast<double>(k) * k);
      sum += term;
    }
    return sum;
  };
  double lo = 2.0, hi = 3.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (j0(mid) > 0.0 ? lo : hi) = mid;
  }
  const double z = 0.5 * (lo + hi);
  return z * z;
}

// Max relative residual of the radial equation for sin(pi r)/(pi r), N = 3, lambda = pi^2.
double sinc_radial_residual() {
  const double pi = std::numbers::pi;
  const auto phi = [&](double r) { return std::sin(pi * r) / (pi * r); };
  double worst = 0.0;
  for (int k = 1; k < 20; ++k) {
    const double r = 0.05 * k;
    const double h = 1e-4;
    const auto flux = [&](double s) { return s * s * (phi(s + 0.5 * h) - phi(s - 0.5 * h)) / h; };
    const double lhs = -(flux(r + 0.5 * h) - flux(r - 0.5 * h)) / h;
    const double rhs = pi * pi * r * r * phi(r);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  return worst;
}

double relative_sup_error(const Field2D& f, const std::function<double(double)>& exact) {
  double err = 0.0, scale = 0.0;
  for (int j = 0; j < f.rows(); ++j) {
    const double v = exact(f.x2[static_cast<std::size_t>(j)]);
    scale = std::max(scale, std::abs(v));
    for (int i = 0; i < f.cols(); ++i) err = std::max(err, std::abs(f.values(j, i) - v));
  }
  return err / scale;
}

// Fields shared by criteria 8 to 11, solved on first use.
class Context {
 public:
  explicit Context(const Options& o) : opts(o) {}

  const Options& opts;

  static const std::vector<std::pair<double, double>>& exponents() {
    static const std::vector<std::pair<double, double>> e = {{2.0, 3.0}, {3.0, 2.0}};
    return e;
  }

  const QuadratureSolution& profile(double p, double gamma) {
    const auto key = std::make_pair(p, gamma);
    auto it = profiles_.find(key);
    if (it == profiles_.end()) {
      it = profiles_.emplace(key, std::make_unique<QuadratureSolution>(build_vM(make_params(p, gamma, 2), 1.0)))
               .first;
    }
    return *it->second;
  }

  // Pure problem, x'-independent data v_1(1) on top.
  const Field2D& layered(double p, double gamma, int nx, int ny) {
    const auto key = std::make_tuple(p, gamma, nx, ny);
    auto it = layered_.find(key);
    if (it == layered_.end()) {
      StripProblem prob;
      prob.params = make_params(p, gamma, 2);
      prob.nx = nx;
      prob.ny = ny;
      prob.top.kind = TopBoundary::Kind::DirichletConst;
      prob.top.value = eval_vM(profile(p, gamma), prob.height).v;
      it = layered_.emplace(key, std::make_unique<Field2D>(solve(prob))).first;
    }
    return *it->second;
  }

  // Pure problem with laterally modulated slope data on top.
  const Field2D& modulated(double p, double gamma) {
    const auto key = std::make_pair(p, gamma);
    auto it = modulated_.find(key);
    if (it == modulated_.end()) {
      StripProblem prob;
      prob.params = make_params(p, gamma, 2);
      prob.nx = 32;
      prob.ny = 128;
      prob.top.kind = TopBoundary::Kind::NeumannSlope;
      prob.top.value = 1.0;
      prob.lateral_amplitude = 0.1;
      it = modulated_.emplace(key, std::make_unique<Field2D>(solve(prob))).first;
    }
    return *it->second;
  }

  std::vector<std::pair<std::string, const Field2D*>> monotone_fields() {
    std::vector<std::pair<std::string, const Field2D*>> out;
    for (const auto& [p, g] : exponents()) {
      out.emplace_back("layered " + tag(p, g), &layered(p, g, kFineNx, kFineNy));
      out.emplace_back("modulated " + tag(p, g), &modulated(p, g));
    }
    return out;
  }

  static constexpr int kFineNx = 128;
  static constexpr int kFineNy = 256;

 private:
  std::map<std::pair<double, double>, std::unique_ptr<QuadratureSolution>> profiles_;
  std::map<std::tuple<double, double, int, int>, std::unique_ptr<Field2D>> layered_;
  std::map<std::pair<double, double>, std::unique_ptr<Field2D>> modulated_;
};

using Checks = std::vector<Check>;

Checks criterion1(Context&) {
  Checks out;
  const Params P = make_params(2.0, 3.0);
  out.push_back({"v0(1) p=2,gamma=3", eval_v0(P, 1.0), std::sqrt(2.0), 1e-12, Relation::Near});
  for (const auto& [p, g] : Context::exponents()) {
    const Params Q = make_params(p, g);
    double worst = 0.0;
    const std::size_t n = kDefaultTablePoints;
    for (std::size_t i = 1; i < n; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n - 1);
      worst = std::max(worst, v0_ode_residual(Q, kDefaultTMax * s * s));
    }
    out.push_back({"ODE residual of v0 " + tag(p, g), worst, 0.0, 1e-6, Relation::AtMost});
  }
  return out;
}

Checks criterion2(Context&) {
  double drift = 0.0, identity = 0.0;
  for (double p : {2.0, 3.0}) {
    for (double g : {2.0, 3.0}) {
      const Params P = make_params(p, g);
      const double K = quadrature_time_factor(p);
      for (double M : {0.0, 0.5, 1.0, 4.0}) {
        const auto sol = build_vM(P, M);
        for (std::size_t i = 1; i < sol.size(); ++i) {
          const double v = sol.v()[i], t = sol.t()[i];
          const double slope = K / quadrature_integrand(P, M, v);
          drift = std::max(drift, std::abs(energy(P, v, slope) - M));
          identity = std::max(identity, std::abs(quadrature_F(P, M, 0.0, v) - K * t) / (K * t));
        }
      }
    }
  }
  return {{"max |E(t) - M|", drift, 0.0, 1e-8, Relation::AtMost},
          {"quadrature identity residual (relative)", identity, 0.0, 1e-10, Relation::AtMost}};
}

Checks criterion3(Context&) {
  Checks out;
  for (const auto& [p, g] : Context::exponents()) {
    const Params P = make_params(p, g);
    for (double lam : {0.5, 2.0, 5.0}) {
      const auto v1 = build_vM(P, 1.0, kDefaultTMax * std::max(lam, 1.0));
      const auto mapped = scaling_map(v1, lam);
      const auto direct = build_vM(P, scaled_energy(P, lam));
      double worst = 0.0;
      for (int k = 0; k <= 200; ++k) {
        const double t = kDefaultTMax * k / 200.0;
        worst = std::max(worst, std::abs(eval_vM(direct, t).v - eval_vM(mapped, t).v));
      }
      std::ostringstream name;
      name << "sup |v_M - scaled v_1| " << tag(p, g) << ",lambda=" << lam;
      out.push_back({name.str(), worst, 0.0, 1e-8, Relation::AtMost});
    }
  }
  return out;
}

Checks criterion4(Context&) {
  Checks out;
  for (double p : {2.0, 3.0}) {
    for (double M : {0.25, 1.0, 4.0}) {
      const Params P = make_params(p, 3.0);
      const auto sol = build_vM(P, M);
      const double slope = eval_vM(sol, kDefaultTMax).v_prime.value;
      std::ostringstream name;
      name << "v'(100) " << tag(p, 3.0) << ",M=" << M;
      out.push_back({name.str(), slope, asymptotic_slope(P, M), 1e-3, Relation::Near});
    }
  }
  return out;
}

Checks criterion5(Context&) {
  Checks out;
  const auto dir = std::filesystem::temp_directory_path() / "splap_acceptance";
  std::filesystem::create_directories(dir);
  for (double g : {0.5, 1.0}) {
    double thrown = 0.0;
    try {
      build_vM(make_params(2.0, g), 1.0);
    } catch (const NonexistenceError&) {
      thrown = 1.0;
    }
    std::ostringstream gs;
    gs << g;
    out.push_back({"build_vM raises nonexistence, gamma=" + gs.str(), thrown, 1.0, 0.0, Relation::Near});
    std::ostringstream sink_out, sink_err;
    const int code = cli::run({"exact1d", "p=2", "gamma=" + gs.str(), "out=" + dir.string()}, sink_out,
                              sink_err);
    const bool message = sink_err.str().find("nonexistent (gamma<=1)") != std::string::npos;
    out.push_back({"exact1d exit code, gamma=" + gs.str(), static_cast<double>(code), 2.0, 0.0, Relation::Near});
    out.push_back({"exact1d message, gamma=" + gs.str(), message ? 1.0 : 0.0, 1.0, 0.0, Relation::Near});
  }
  return out;
}

Checks criterion6(Context&) {
  const double pi = std::numbers::pi;
  Checks out;
  const double l1 = solve_eigen(1, 2.0).lambda1;
  const double fd = fd_eigenvalue_1d(2000);
  out.push_back({"N=1 oracle (finite differences) vs (pi/2)^2", fd, 0.25 * pi * pi, 1e-4, Relation::Near});
  out.push_back({"lambda1 N=1 vs finite-difference oracle", l1, fd, 1e-4, Relation::Near});
  const double l2 = solve_eigen(2, 2.0).lambda1;
  const double j0 = bessel_j0_zero_squared();
  out.push_back({"N=2 oracle (J0 zero) vs 5.78319", j0, 5.78319, 1e-3, Relation::Near});
  out.push_back({"lambda1 N=2 vs J0 oracle", l2, j0, 1e-3, Relation::Near});
  const auto pair3 = solve_eigen(3, 2.0);
  out.push_back({"N=3 oracle: sin(pi r)/(pi r) residual", sinc_radial_residual(), 0.0, 1e-6, Relation::AtMost});
  out.push_back({"lambda1 N=3 vs pi^2", pair3.lambda1, pi * pi, 1e-3, Relation::Near});
  out.push_back({"phi N=3 at r=0.5 vs 2/pi", eval_phi(pair3, 0.5), 2.0 / pi, 1e-6, Relation::Near});
  return out;
}

Checks criterion7(Context&) {
  Checks out;
  const auto add = [&](const std::string& name, const Barrier& b) {
    const auto rep = validate_barrier(b);
    out.push_back({"worst violation " + name, rep.worst_violation, 0.0, 1e-5, Relation::AtMost});
  };
  const FunctionSpec bounded{"1/(1+t) - 0.3", [](double t) { return 1.0 / (1.0 + t) - 0.3; }};
  add("WMu", build_wmu(2.0, 1.0, 1.0, 2.0, bounded));
  const Params P = make_params(2.0, 3.0, 2);
  const auto pair = solve_eigen(2, 2.0);
  add("EigenPower", build_eigen_power(P, 1.0, 0.5, pair));
  add("LinearLower", build_linear_lower(P, 1.0, 0.9, pair));
  add("V0Shift", build_v0_shift(P, 2.0, 0.1));
  struct Annulus {
    std::string name;
    int N;
    double p;
  };
  for (const auto& a : {Annulus{"Fundamental", 3, 2.0}, Annulus{"Logarithmic", 2, 2.0}}) {
    const double R = 1.0, u0 = 1.0, CH = 2.0;
    const Barrier b = build_annulus_barrier(a.N, a.p, R, u0, CH);
    add(a.name, b);
    Eigen::VectorXd inner = b.center(), outer = b.center();
    inner[a.N - 1] -= R;
    outer[a.N - 1] -= 4.0 * R;
    out.push_back({a.name + " value on |x - x0| = R", b(inner), u0 / CH, 4 * std::numeric_limits<double>::epsilon(),
                   Relation::Near});
    out.push_back({a.name + " value on |x - x0| = 4R", b(outer), 0.0, 4 * std::numeric_limits<double>::epsilon(),
                   Relation::Near});
  }
  return out;
}

Checks criterion8(Context& ctx) {
  Checks out;
  for (const auto& [p, g] : Context::exponents()) {
    const auto& sol = ctx.profile(p, g);
    const auto exact = [&](double y) { return eval_vM(sol, y).v; };
    const Field2D& coarse = ctx.layered(p, g, Context::kFineNx / 2, Context::kFineNy / 2);
    const Field2D& fine = ctx.layered(p, g, Context::kFineNx, Context::kFineNy);
    const double ec = relative_sup_error(coarse, exact);
    const double ef = relative_sup_error(fine, exact);
    out.push_back({"relative sup error 128x256 " + tag(p, g), ef, 0.0, 1e-3, Relation::AtMost});
    out.push_back({"observed order " + tag(p, g), std::log2(ec / ef), 1.0, 0.0, Relation::AtLeast});
    out.push_back({"final residual 128x256 " + tag(p, g), fine.final_residual, 0.0,
                   fine.problem.solver.rtol, Relation::AtMost});
  }
  return out;
}

Checks criterion9(Context& ctx) {
  Checks out;
  for (const auto& [name, f] : ctx.monotone_fields()) {
    out.push_back({"min du/dx_N " + name, monotonicity_check(*f), 0.0, 1e-10, Relation::AtLeast});
  }
  return out;
}

Checks criterion10(Context& ctx) {
  Checks out;
  for (const auto& [name, f] : ctx.monotone_fields()) {
    const auto& P = f->problem.params;
    const auto [lo, hi] = default_window(*f);
    std::vector<double> x, v;
    for (int j = 0; j < f->rows(); ++j) {
      for (int i = 0; i < f->cols(); ++i) {
        x.push_back(f->x2[static_cast<std::size_t>(j)]);
        v.push_back(f->values(j, i));
      }
    }
    out.push_back({"u exponent " + name, fit_exponent(x, v, lo, hi).exponent, P.beta_u(), 0.02, Relation::Near});
    const auto scans = gradient_blowup_scan(*f, 0.5, {Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(0.6, 0.8)});
    out.push_back({"du/dx_N exponent " + name, scans[0].fit.exponent, P.beta_grad(), 0.05, Relation::Near});
    out.push_back({"oblique derivative exponent " + name, scans[1].fit.exponent, P.beta_grad(), 0.05,
                   Relation::Near});
  }
  return out;
}

Checks criterion11(Context& ctx) {
  Checks out;
  for (const auto& [name, f] : ctx.monotone_fields()) {
    const double tol = f->problem.solver.rtol;
    for (double lam : {0.1, 0.25}) {
      std::ostringstream ls;
      ls << lam;
      out.push_back({"reflection lam=" + ls.str() + " " + name, reflection_compare(*f, lam), 0.0, 1e-8,
                     Relation::AtMost});
      double slide = -std::numeric_limits<double>::infinity();
      for (const Eigen::Vector2d& nu : {Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(0.6, 0.8), Eigen::Vector2d(-0.8, 0.6)}) {
        slide = std::max(slide, sliding_compare(*f, nu, lam));
      }
      out.push_back({"sliding lam=" + ls.str() + " " + name, slide, 0.0, tol, Relation::AtMost});
    }
  }
  return out;
}

Checks criterion12(Context&) {
  const Params P = make_params(2.0, 3.0, 2);
  const auto pts = annulus_grid(2, 1.0, 2.0, std::numbers::pi / 6, 5 * std::numbers::pi / 6, 11, 11);
  const PointFunction plane = [](const Eigen::VectorXd& x) { return x[1]; };
  const PointFunction v0 = [&](const Eigen::VectorXd& x) { return eval_v0(P, x[1]); };
  const double harmonic = kelvin_residual(kelvin_transform(plane, P), P, pts, false);
  const auto twice = kelvin_transform(kelvin_transform(v0, P), P);
  double involution = 0.0;
  for (const auto& x : pts) involution = std::max(involution, std::abs(twice(x) - v0(x)) / std::abs(v0(x)));
  const double source = kelvin_residual(kelvin_transform(v0, P), P, pts, true);
  return {{"harmonic pair residual", harmonic, 0.0, 1e-8, Relation::AtMost},
          {"involution (relative)", involution, 0.0, 1e-12, Relation::AtMost},
          {"transformed v0 residual", source, 0.0, 1e-4, Relation::AtMost}};
}

Checks criterion13(Context& ctx) {
  Checks out;
  const std::uint64_t seed = ctx.opts.seed;
  for (int N : {2, 3}) {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const std::string name = "p=" + std::to_string(p).substr(0, 3) + ",N=" + std::to_string(N);
      const auto c = estimate_ineq_constants(p, N, 100000, seed);
      const auto other = estimate_ineq_constants(p, N, 100000, seed + 1);
      out.push_back({"C1 > 0 " + name, c.C1, 0.0, 0.0, Relation::AtLeast});
      out.push_back({"violations on 1e5 fresh pairs " + name,
                     static_cast<double>(count_ineq_violations(p, N, c, 100000, seed + 2)), 0.0, 0.0,
                     Relation::Near});
      out.push_back({"C1 seed stability " + name, std::abs(c.C1 - other.C1) / c.C1, 0.0, 0.05, Relation::AtMost});
      out.push_back({"C2 seed stability " + name, std::abs(c.C2 - other.C2) / c.C2, 0.0, 0.05, Relation::AtMost});
      if (p == 2.0) {
        out.push_back({"C1 at p=2 " + name, c.C1, 1.0, 1e-12, Relation::Near});
        out.push_back({"C2 at p=2 " + name, c.C2, 1.0, 1e-12, Relation::Near});
      } else {
        out.push_back({"C2 finite " + name, c.C2, std::numeric_limits<double>::max(), 0.0, Relation::StrictlyBelow});
      }
    }
  }
  return out;
}

Checks criterion14(Context&) {
  Checks out;
  struct Fixture {
    std::string name;
    std::function<double(double)> g;
    double l1, l2, eps;
  };
  const std::vector<Fixture> decreasing = {
      {"-t", [](double t) { return -t; }, 0.0, 2.0, 0.1},
      {"1/t", [](double t) { return 1.0 / t; }, 0.5, 1.5, 0.5},
      {"t^-3", [](double t) { return std::pow(t, -3.0); }, 0.5, 1.5, 0.5},
      {"-(t-1)^3", [](double t) { return -std::pow(t - 1.0, 3.0); }, 0.0, 2.0, 0.05},
      {"exp(-t)", [](double t) { return std::exp(-t); }, 0.0, 30.0, 1.0},
  };
  for (const auto& f : decreasing) {
    out.push_back({"sup for " + f.name, decreasing_quotient_sup(f.g, f.l1, f.l2, f.eps), 0.0, 0.0,
                   Relation::StrictlyBelow});
  }
  const auto plateau = [](double t) { return t < 0.8 ? 0.8 - t : (t > 1.2 ? 1.2 - t : 0.0); };
  out.push_back({"sup with plateau of width 0.4, eps=0.3",
                 decreasing_quotient_sup(plateau, 0.0, 2.0, 0.3), 0.0, 0.0, Relation::AtLeast});
  const auto exact_plateau = [](double t) { return t < 0.5 ? 0.5 - t : (t > 1.0 ? 1.0 - t : 0.0); };
  out.push_back({"sup with plateau of width 0.5, eps=0.5",
                 decreasing_quotient_sup(exact_plateau, 0.0, 2.0, 0.5), 0.0, 0.0, Relation::AtLeast});
  const auto bump = [](double t) { return -t + 2.0 * std::max(0.0, 0.25 - std::abs(t - 1.0)); };
  out.push_back({"sup with increasing stretch", decreasing_quotient_sup(bump, 0.0, 2.0, 0.2), 0.0, 0.0,
                 Relation::AtLeast});
  return out;
}

using Runner = Checks (*)(Context&);

Runner runner(int id) {
  static const Runner table[] = {criterion1,  criterion2,  criterion3,  criterion4,  criterion5,
                                 criterion6,  criterion7,  criterion8,  criterion9,  criterion10,
                                 criterion11, criterion12, criterion13, criterion14};
  if (id < 1 || id > 14) throw ConfigError("unknown criterion id " + std::to_string(id));
  return table[id - 1];
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Near:
      return "near";
    case Relation::AtMost:
      return "at_most";
    case Relation::AtLeast:
      return "at_least";
    case Relation::StrictlyBelow:
      return "below";
  }
  return "?";
}

}  // namespace

std::vector<CriterionResult> run(const Options& opts, const std::vector<int>& ids) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (const auto& c : criteria()) todo.push_back(c.id);
  }
  Context ctx(opts);
  std::vector<CriterionResult> results;
  for (int id : todo) {
    const Runner fn = runner(id);
    CriterionResult r;
    r.id = id;
    r.title = criteria()[static_cast<std::size_t>(id - 1)].title;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.checks = fn(ctx);
      for (auto& c : r.checks) c.tolerance *= opts.tol_scale;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "id=" << r.id << " status=" << (r.pass() ? "PASS" : "FAIL");
  if (const Check* c = r.decisive(); c && r.error.empty()) {
    os << " measured=" << fmt(c->measured) << " target=" << fmt(c->target)
       << " tolerance=" << fmt(c->tolerance) << " relation=" << relation_name(c->relation) << " check=\""
       << c->name << "\"";
  } else {
    os << " measured=nan target=nan tolerance=nan error=\"" << r.error << "\"";
  }
  os << " title=\"" << r.title << "\"";
  return os.str();
}

std::string detail_lines(const CriterionResult& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << "  " << (c.pass() ? "ok   " : "FAIL ") << c.name << ": measured=" << fmt(c.measured)
       << " target=" << fmt(c.target) << " tolerance=" << fmt(c.tolerance) << " (" << relation_name(c.relation)
       << ")\n";
  }
  if (!r.error.empty()) os << "  error: " << r.error << "\n";
  return os.str();
}

}  // namespace splap::acceptance
