#include "splap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "splap/errors.hpp"
#include "splap/numerics.hpp"

namespace splap {

FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& values, double lo,
                       double hi) {
  if (x.size() != values.size()) throw DomainError("fit_exponent: size mismatch");
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("fit_exponent: window must satisfy 0 < lo < hi");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < lo || x[k] > hi) continue;
    if (!(values[k] > 0.0)) {
      std::ostringstream os;
      os << "fit_exponent: nonpositive sample " << values[k] << " at x = " << x[k];
      throw DomainError(os.str());
    }
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(values[k]));
  }
  if (lx.size() < 8) throw DomainError("fit_exponent: fewer than 8 samples in the window");
  const auto line = numerics::fit_line(lx, ly);
  FitResult out;
  out.exponent = line.slope;
  out.constant = std::exp(line.intercept);
  out.rms_residual = line.rms;
  out.window_lo = lo;
  out.window_hi = hi;
  out.samples = lx.size();
  return out;
}

std::vector<GradientScan> gradient_blowup_scan(const Field2D& field, double beta,
                                               const std::vector<Eigen::Vector2d>& directions) {
  const auto [lo, hi] = default_window(field);
  return gradient_blowup_scan(field, beta, directions, lo, hi);
}

std::vector<GradientScan> gradient_blowup_scan(const Field2D& field, double beta,
                                               const std::vector<Eigen::Vector2d>& directions,
                                               double window_lo, double window_hi) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("gradient_blowup_scan: beta must lie in (0, 1]");
  for (const auto& eta : directions) {
    if (std::abs(eta.norm() - 1.0) > 1e-12) throw DomainError("gradient_blowup_scan: direction is not a unit vector");
    if (eta[1] < beta) {
      std::ostringstream os;
      os << "gradient_blowup_scan: direction (" << eta[0] << ", " << eta[1]
         << ") makes (eta, e_N) < " << beta;
      throw DomainError(os.str());
    }
  }
  const double bg = field.problem.params.beta_grad();
  std::vector<GradientScan> out;
  for (const auto& eta : directions) {
    GradientScan scan;
    scan.direction = eta;
    scan.c1 = std::numeric_limits<double>::infinity();
    scan.c2 = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < field.rows(); ++j) {
      const double y = field.x2[static_cast<std::size_t>(j)];
      if (y < window_lo || y > window_hi) continue;
      const double h = 1e-4 * y;
      for (int i = 0; i < field.cols(); ++i) {
        const double x = field.x1[static_cast<std::size_t>(i)];
        const double d = (interpolate(field, x + h * eta[0], y + h * eta[1]) -
                          interpolate(field, x - h * eta[0], y - h * eta[1])) /
                         (2.0 * h);
        scan.x2.push_back(y);
        scan.derivative.push_back(d);
        const double scaled = d * std::pow(y, -bg);
        scan.c1 = std::min(scan.c1, scaled);
        scan.c2 = std::max(scan.c2, scaled);
      }
    }
    scan.fit = fit_exponent(scan.x2, scan.derivative, window_lo, window_hi);
    out.push_back(std::move(scan));
  }
  return out;
}

double scaling_coefficient(const Params& params, double eps) {
  if (!(eps > 0.0)) throw DomainError("scaling: eps must be positive");
  return std::pow(eps, params.gamma * params.beta_u());
}

ScaledSamples scaling_blowup(const std::function<double(double)>& u, double t_max, double eps,
                             const Params& params, const std::vector<double>& t) {
  ScaledSamples out;
  out.coefficient = scaling_coefficient(params, eps);
  const double factor = std::pow(eps, -params.beta_u());
  for (double s : t) {
    const double src = eps * s;
    if (src < 0.0 || src > t_max) {
      std::ostringstream os;
      os << "scaling_blowup: eps t = " << src << " outside [0, " << t_max << "]";
      throw RangeError(os.str());
    }
    out.t.push_back(s);
    out.w.push_back(factor * u(src));
  }
  return out;
}

Field2D scaling_blowup(const Field2D& field, double eps) {
  const Params& P = field.problem.params;
  const double coef = scaling_coefficient(P, eps);
  const double beta = P.beta_u();
  const double eb = std::pow(eps, beta);

  Field2D out = field;
  StripProblem& prob = out.problem;
  switch (P.g.kind()) {
    case Perturbation::Kind::None:
      break;
    case Perturbation::Kind::Constant:
      prob.params.g = Perturbation::constant(coef * P.g.value(0.0));
      break;
    case Perturbation::Kind::Linear:
      prob.params.g = Perturbation::linear(coef * P.g.value(0.0), coef * eb * P.g.derivative(0.0));
      break;
    case Perturbation::Kind::Tabulated:
      throw DomainError("scaling_blowup: tabulated perturbations are not rescaled");
  }
  prob.height /= eps;
  prob.period /= eps;
  switch (prob.top.kind) {
    case TopBoundary::Kind::DirichletV0:
      prob.top.epsilon /= eps;
      break;
    case TopBoundary::Kind::DirichletConst:
      prob.top.value /= eb;
      break;
    case TopBoundary::Kind::NeumannSlope:
      prob.top.value *= eps / eb;
      break;
  }
  out.x1 = prob.x1_nodes();
  out.x2 = prob.x2_nodes();
  out.values /= eb;
  return out;
}

namespace {

void require_conformal(const Params& params) {
  if (params.p != static_cast<double>(params.N)) {
    std::ostringstream os;
    os << "Kelvin transform needs p = N, got p = " << params.p << ", N = " << params.N;
    throw DomainError(os.str());
  }
}

Eigen::VectorXd invert(const Eigen::VectorXd& x) {
  const double r2 = x.squaredNorm();
  if (!(r2 > 0.0)) throw DomainError("Kelvin transform undefined at the origin");
  return x / r2;
}

// -div(|grad u|^{p-2} grad u) with central differences of spacing h.
double p_laplacian_step(const PointFunction& u, double p, const Eigen::VectorXd& x, double h) {
  const auto n = x.size();
  const auto flux = [&](const Eigen::VectorXd& y, Eigen::Index k) {
    Eigen::VectorXd g(n);
    for (Eigen::Index m = 0; m < n; ++m) {
      Eigen::VectorXd a = y, b = y;
      a[m] += h;
      b[m] -= h;
      g[m] = (u(a) - u(b)) / (2.0 * h);
    }
    return std::pow(g.norm(), p - 2.0) * g[k];
  };
  double div = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd a = x, b = x;
    a[k] += h;
    b[k] -= h;
    div += (flux(a, k) - flux(b, k)) / (2.0 * h);
  }
  return -div;
}

}  // namespace

PointFunction kelvin_transform(PointFunction u, const Params& params) {
  require_conformal(params);
  return [u = std::move(u)](const Eigen::VectorXd& x) { return u(invert(x)); };
}

std::vector<double> kelvin_transform(const PointFunction& u, const Params& params,
                                     const std::vector<Eigen::VectorXd>& points) {
  require_conformal(params);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(u(invert(x)));
  return out;
}

double p_laplacian(const PointFunction& u, double p, const Eigen::VectorXd& x, double h) {
  const double coarse = p_laplacian_step(u, p, x, h);
  const double fine = p_laplacian_step(u, p, x, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double kelvin_residual(const PointFunction& u, const Params& params,
                       const std::vector<Eigen::VectorXd>& points, bool with_source, double h) {
  require_conformal(params);
  double worst = 0.0;
  for (const auto& x : points) {
    const double lhs = p_laplacian(u, params.p, x, h);
    double rhs = 0.0;
    if (with_source) rhs = std::pow(x.squaredNorm(), -params.N) * std::pow(u(x), -params.gamma);
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  return worst;
}

std::vector<Eigen::VectorXd> annulus_grid(int N, double r_lo, double r_hi, double t_lo,
                                          double t_hi, int nr, int nt) {
  if (N < 2) throw DomainError("annulus_grid: N must be at least 2");
  if (nr < 2 || nt < 2) throw DomainError("annulus_grid: need at least 2 x 2 points");
  std::vector<Eigen::VectorXd> pts;
  for (int a = 0; a < nr; ++a) {
    const double r = r_lo + (r_hi - r_lo) * a / (nr - 1);
    for (int b = 0; b < nt; ++b) {
      const double t = t_lo + (t_hi - t_lo) * b / (nt - 1);
      Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
      x[0] = r * std::cos(t);
      x[N - 1] = r * std::sin(t);
      pts.push_back(std::move(x));
    }
  }
  return pts;
}

namespace {

Eigen::VectorXd p_field(const Eigen::VectorXd& xi, double p) {
  const double n = xi.norm();
  if (n == 0.0) return Eigen::VectorXd::Zero(xi.size());
  return std::pow(n, p - 2.0) * xi;
}

}  // namespace

double ineq_lower_ratio(const Eigen::VectorXd& xi, const Eigen::VectorXd& xi2, double p) {
  const Eigen::VectorXd d = xi - xi2;
  const double base = xi.norm() + xi2.norm();
  if (base == 0.0 || d.squaredNorm() == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double lhs = (p_field(xi, p) - p_field(xi2, p)).dot(d);
  return lhs / (std::pow(base, p - 2.0) * d.squaredNorm());
}

double ineq_upper_ratio(const Eigen::VectorXd& xi, const Eigen::VectorXd& xi2, double p) {
  const Eigen::VectorXd d = xi - xi2;
  const double base = xi.norm() + xi2.norm();
  if (base == 0.0 || d.squaredNorm() == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (p_field(xi, p) - p_field(xi2, p)).norm() / (std::pow(base, p - 2.0) * d.norm());
}

namespace {

struct PairSampler {
  int N;
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> logr{-3.0, 3.0};
  std::normal_distribution<double> normal{0.0, 1.0};

  Eigen::VectorXd draw() {
    Eigen::VectorXd v(N);
    double n = 0.0;
    while (n == 0.0) {
      for (int k = 0; k < N; ++k) v[k] = normal(rng);
      n = v.norm();
    }
    return std::pow(10.0, logr(rng)) / n * v;
  }
};

}  // namespace

IneqConstants estimate_ineq_constants(double p, int N, int trials, std::uint64_t seed) {
  if (!(p > 1.0)) throw DomainError("estimate_ineq_constants: p must exceed 1");
  if (N < 1) throw DomainError("estimate_ineq_constants: N must be at least 1");
  if (trials < 10000) throw DomainError("estimate_ineq_constants: need at least 1e4 trials");
  IneqConstants out;
  out.C1 = std::numeric_limits<double>::infinity();
  out.C2 = 0.0;
  const auto take = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double lo = ineq_lower_ratio(a, b, p);
    const double hi = ineq_upper_ratio(a, b, p);
    if (std::isnan(lo) || std::isnan(hi)) {
      ++out.skipped;
      return;
    }
    out.C1 = std::min(out.C1, lo);
    out.C2 = std::max(out.C2, hi);
    ++out.pairs;
  };

  PairSampler sampler{N, std::mt19937_64(seed)};
  for (int k = 0; k < trials; ++k) take(sampler.draw(), sampler.draw());

  // The extremes sit on collinear pairs and in the limit xi' -> xi, which
  // random pairs essentially never reach.
  Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
  e[0] = 1.0;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(N);
  f[N > 1 ? 1 : 0] = 1.0;
  for (double rho : {0.0, 1e-6, 1e-3, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0}) {
    take(e, rho * e);
    take(e, -rho * e);
  }
  for (double delta : {1e-6, 1e-5, 1e-4}) {
    take(e, e + delta * e);
    if (N > 1) take(e, e + delta * f);
  }
  return out;
}

std::size_t count_ineq_violations(double p, int N, const IneqConstants& c, int pairs,
                                  std::uint64_t seed) {
  PairSampler sampler{N, std::mt19937_64(seed)};
  std::size_t bad = 0;
  for (int k = 0; k < pairs; ++k) {
    const Eigen::VectorXd a = sampler.draw(), b = sampler.draw();
    const double lo = ineq_lower_ratio(a, b, p);
    const double hi = ineq_upper_ratio(a, b, p);
    if (std::isnan(lo) || std::isnan(hi)) continue;
    if (lo < c.C1 * (1.0 - 1e-9) || hi > c.C2 * (1.0 + 1e-9)) ++bad;
  }
  return bad;
}

double decreasing_quotient_sup(const std::function<double(double)>& g, double l1, double l2,
                               double eps, int points) {
  if (!(eps > 0.0)) throw DomainError("decreasing_quotient_sup: eps must be positive");
  if (l2 - l1 < eps) throw DomainError("decreasing_quotient_sup: need l2 - l1 >= eps");
  if (points < 2) throw DomainError("decreasing_quotient_sup: need at least 2 grid points");
  const auto n = static_cast<std::size_t>(points);
  std::vector<double> t(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = k + 1 == n ? l2 : l1 + (l2 - l1) * static_cast<double>(k) / static_cast<double>(n - 1);
    v[k] = g(t[k]);
  }
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    const auto first = std::lower_bound(t.begin() + static_cast<std::ptrdiff_t>(a), t.end(), t[a] + eps);
    for (auto it = first; it != t.end(); ++it) {
      const auto b = static_cast<std::size_t>(it - t.begin());
      sup = std::max(sup, (v[b] - v[a]) / (t[b] - t[a]));
    }
    if (t[a] + eps <= l2) sup = std::max(sup, (g(t[a] + eps) - v[a]) / eps);
    if (t[a] - eps >= l1) sup = std::max(sup, (v[a] - g(t[a] - eps)) / eps);
  }
  return sup;
}

}  // namespace splap
