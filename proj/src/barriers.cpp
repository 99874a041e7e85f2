#include "splap/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "splap/errors.hpp"
#include "splap/exact1d.hpp"
#include "splap/numerics.hpp"

namespace splap {

std::string to_string(BarrierKind kind) {
  switch (kind) {
    case BarrierKind::WMu:
      return "WMu";
    case BarrierKind::EigenPower:
      return "EigenPower";
    case BarrierKind::LinearLower:
      return "LinearLower";
    case BarrierKind::Fundamental:
      return "Fundamental";
    case BarrierKind::Logarithmic:
      return "Logarithmic";
    case BarrierKind::V0Shift:
      return "V0Shift";
  }
  return "?";
}

std::string to_string(Sense sense) { return sense == Sense::Sub ? "Sub" : "Super"; }

Barrier::Barrier(BarrierKind kind, Sense sense, Params params,
                 std::map<std::string, double> coeffs, Region region, int dim,
                 Eigen::VectorXd center, Profile profile, FunctionSpec f)
    : kind_(kind),
      sense_(sense),
      params_(std::move(params)),
      coeffs_(std::move(coeffs)),
      region_(region),
      dim_(dim),
      center_(std::move(center)),
      profile_(std::move(profile)),
      f_(std::move(f)) {}

double Barrier::coeff(const std::string& name) const {
  const auto it = coeffs_.find(name);
  if (it == coeffs_.end()) {
    throw ConfigError(to_string(kind_) + " barrier has no coefficient '" + name + "'");
  }
  return it->second;
}

double Barrier::coordinate(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DomainError("point dimension does not match barrier");
  if (!radial()) return x[dim_ - 1];
  return (x - center_).norm();
}

Eigen::VectorXd Barrier::gradient(const Eigen::VectorXd& x) const {
  const double s = coordinate(x);
  if (!radial()) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
    g[dim_ - 1] = profile_slope(s);
    return g;
  }
  return profile_slope(s) * (x - center_) / s;
}

namespace {

Eigen::VectorXd origin(int dim) { return Eigen::VectorXd::Zero(dim); }

Eigen::VectorXd along_axis(int dim, double s) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  x[dim - 1] = s;
  return x;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  }
  return out;
}

std::vector<double> uniform(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// w_mu

struct WMuShape {
  double p, rho, c, mu, A;

  double blend_start() const { return 0.9 * rho; }

  double h(double s) const {
    const double a = blend_start();
    if (s <= a) return A;
    if (s >= rho) return c / (s * s);
    const double L = rho - a;
    const double u = (s - a) / L;
    const double u2 = u * u, u3 = u2 * u;
    const double y1 = c / (rho * rho), d1 = -2.0 * c / (rho * rho * rho);
    return (2 * u3 - 3 * u2 + 1) * A + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * L * d1;
  }

  // Antiderivative in u of the blend, so that the integral from a to s is L * (I(u) - I(0)).
  double blend_primitive(double u) const {
    const double L = rho - blend_start();
    const double y1 = c / (rho * rho), d1 = -2.0 * c / (rho * rho * rho);
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    return A * (u4 / 2 - u3 + u) + y1 * (-u4 / 2 + u3) + L * d1 * (u4 / 4 - u3 / 3);
  }

  double H(double s) const {
    if (s >= rho) return c / rho - c / s;
    const double a = blend_start();
    const double L = rho - a;
    if (s >= a) return -L * (blend_primitive(1.0) - blend_primitive((s - a) / L));
    return H(a) - A * (a - s);
  }

  double integrand(double s) const { return std::pow(mu - H(s), -1.0 / p); }

  double F(double w) const {
    const auto psi = [this](double s) { return integrand(s); };
    const double a = blend_start();
    double total = numerics::adaptive_integral(psi, 0.0, std::min(w, a));
    if (w > a) total += numerics::adaptive_integral(psi, a, std::min(w, rho));
    if (w > rho) total += numerics::adaptive_integral(psi, rho, w);
    return total;
  }

  double value(double t) const {
    if (t <= 0.0) return 0.0;
    const double target = quadrature_time_factor(p) * t;
    // integrand >= (mu - H(0))^{-1/p}
    const double hi = target * std::pow(mu - H(0.0), 1.0 / p);
    return numerics::safeguarded_newton([&](double w) { return F(w) - target; },
                                        [&](double w) { return integrand(w); }, 0.0, hi);
  }

  double slope_at_height(double w) const {
    return std::pow(p / (p - 1.0) * (mu - H(w)), 1.0 / p);
  }
};

WMuShape wmu_shape(const Barrier& b) {
  if (b.kind() != BarrierKind::WMu) throw ConfigError("not a w_mu barrier");
  return {b.coeff("p"), b.coeff("rho"), b.coeff("c"), b.coeff("mu"), b.coeff("A")};
}

}  // namespace

Barrier build_wmu(double p, double rho, double c, double mu, const FunctionSpec& f) {
  if (!(p > 1.0)) throw DomainError("build_wmu: p must exceed 1");
  if (!(rho > 0.0) || !(c > 0.0)) throw DomainError("build_wmu: rho and c must be positive");
  if (mu < c / rho) {
    std::ostringstream os;
    os << "build_wmu: mu = " << mu << " below c/rho = " << c / rho;
    throw DomainError(os.str());
  }
  // Level of h on (0, 0.9 rho] from samples of f.
  std::vector<double> samples = uniform(rho / 1024.0, rho, 1024);
  for (double s : log_spaced(rho * 1e-8, rho / 1024.0, 64)) samples.push_back(s);
  double fmax = 0.0;
  for (double s : samples) {
    const double v = f(s);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "build_wmu: f(" << s << ") is not finite";
      throw DominationError(os.str());
    }
    fmax = std::max(fmax, v);
  }
  const WMuShape shape{p, rho, c, mu, fmax + 1.0};

  // Verification on a different grid that also reaches closer to 0.
  std::vector<double> check = uniform(rho / 2048.0, rho * (1.0 - 1.0 / 2048.0), 1024);
  for (double s : log_spaced(rho * 1e-10, rho / 2048.0, 64)) check.push_back(s);
  for (double s : check) {
    const double v = f(s);
    if (!(shape.h(s) > std::max(v, 0.0))) {
      std::ostringstream os;
      os << "build_wmu: h(" << s << ") = " << shape.h(s) << " does not dominate max(f, 0) = "
         << std::max(v, 0.0);
      throw DominationError(os.str());
    }
  }

  Params params;
  params.p = p;
  params.N = 1;
  Profile prof;
  prof.value = [shape](double t) { return shape.value(t); };
  prof.slope = [shape](double t) { return shape.slope_at_height(shape.value(t)); };
  prof.rhs = [shape](double t) { return shape.h(shape.value(t)); };
  std::map<std::string, double> coeffs{
      {"p", p}, {"rho", rho}, {"c", c}, {"mu", mu}, {"A", shape.A}};
  return Barrier(BarrierKind::WMu, Sense::Super, params, std::move(coeffs),
                 Region{Region::Shape::Strip, 0.0, 2.0}, 1, origin(1), std::move(prof), f);
}

double wmu_h(const Barrier& b, double s) { return wmu_shape(b).h(s); }
double wmu_H(const Barrier& b, double s) { return wmu_shape(b).H(s); }

// ---------------------------------------------------------------------------
// Eigenfunction barriers

namespace {

void check_pair(const Params& params, const EigenPair& pair) {
  if (pair.N != params.N || pair.p != params.p) {
    std::ostringstream os;
    os << "eigenpair (N=" << pair.N << ", p=" << pair.p << ") does not match params (N="
       << params.N << ", p=" << params.p << ")";
    throw ConfigError(os.str());
  }
}

// alpha / s^{gamma+p-1}
double alpha_unit(const Params& params, const EigenPair& pair, double r) {
  const double p = params.p, g = params.gamma;
  const double e = g + p - 1.0;
  const double beta = p / e;
  const double phi = eval_phi(pair, r);
  const double dphi = eval_dphi(pair, r);
  return std::pow(beta, p - 1.0) *
         ((g - 1.0) * (p - 1.0) / e * std::pow(std::abs(dphi), p) + pair.lambda1 * std::pow(phi, p));
}

}  // namespace

Barrier build_eigen_power(const Params& params, double c0, double t0, const EigenPair& pair) {
  params.validate();
  check_pair(params, pair);
  if (!(c0 > 0.0) || !(t0 > 0.0)) throw DomainError("build_eigen_power: c0, t0 must be positive");
  const double p = params.p, g = params.gamma;
  const double e = g + p - 1.0;
  const double beta = p / e;

  double sup_unit = -std::numeric_limits<double>::infinity();
  for (double r : pair.r) sup_unit = std::max(sup_unit, alpha_unit(params, pair, r));
  const double s = sup_unit > 0.0 ? std::pow(c0 / sup_unit, 1.0 / e) : 1.0;
  const double w0 = s * std::pow(pair.normalization, beta);
  const double R0 = std::pow(t0 / w0, 1.0 / beta);

  auto shared = std::make_shared<const EigenPair>(pair);
  Profile prof;
  prof.value = [shared, s, beta](double r) { return s * std::pow(eval_phi(*shared, r), beta); };
  prof.slope = [shared, s, beta](double r) {
    return s * beta * std::pow(eval_phi(*shared, r), beta - 1.0) * eval_dphi(*shared, r);
  };
  prof.rhs = [shared, params, s, beta, e](double r) {
    const double w = s * std::pow(eval_phi(*shared, r), beta);
    return std::pow(s, e) * alpha_unit(params, *shared, r) / std::pow(w, params.gamma);
  };
  std::map<std::string, double> coeffs{{"s", s},   {"R0", R0},
                                       {"beta", beta}, {"sup_alpha", std::pow(s, e) * sup_unit},
                                       {"c0", c0}, {"t0", t0}};
  return Barrier(BarrierKind::EigenPower, Sense::Sub, params, std::move(coeffs),
                 Region{Region::Shape::Ball, 0.0, 1.0}, params.N, origin(params.N),
                 std::move(prof), singular_nonlinearity(params));
}

double eigen_power_alpha(const Barrier& b, double r) {
  if (b.kind() != BarrierKind::EigenPower) throw ConfigError("not an eigen-power barrier");
  // alpha = -Delta_p w * w^gamma; recover it from the stored profile.
  return b.claimed_rhs(r) * std::pow(b.profile(r), b.params().gamma);
}

Barrier build_linear_lower(const Params& params, double c0, double t0, const EigenPair& pair) {
  params.validate();
  check_pair(params, pair);
  if (!(c0 > 0.0) || !(t0 > 0.0)) throw DomainError("build_linear_lower: c0, t0 must be positive");
  const double p = params.p;
  std::vector<double> samples = uniform(t0 / 512.0, t0 * (1.0 - 1.0 / 512.0), 511);
  for (double t : log_spaced(t0 * 1e-8, t0 / 512.0, 32)) samples.push_back(t);
  for (double t : samples) {
    const double f = params.f(t);
    if (!(f > c0 * std::pow(t, p - 1.0))) {
      std::ostringstream os;
      os << "build_linear_lower: f(" << t << ") = " << f << " does not exceed c0 t^{p-1} = "
         << c0 * std::pow(t, p - 1.0);
      throw DominationError(os.str());
    }
  }
  const double R = std::pow(2.0 * pair.lambda1 / c0, 1.0 / p);
  auto shared = std::make_shared<const EigenPair>(normalized(pair, t0));
  const double C = std::abs(eval_dphi(*shared, 1.0)) / R;
  Profile prof;
  prof.value = [shared, R](double r) { return eval_phi_scaled(*shared, R, r); };
  prof.slope = [shared, R](double r) { return eval_dphi_scaled(*shared, R, r); };
  prof.rhs = [shared, R, c0, p](double r) {
    return 0.5 * c0 * std::pow(eval_phi_scaled(*shared, R, r), p - 1.0);
  };
  std::map<std::string, double> coeffs{{"R", R}, {"C", C}, {"t0", t0}, {"c0", c0}};
  return Barrier(BarrierKind::LinearLower, Sense::Sub, params, std::move(coeffs),
                 Region{Region::Shape::Ball, 0.0, R}, params.N, origin(params.N), std::move(prof),
                 singular_nonlinearity(params));
}

double linear_lower_bound(const Barrier& b, double xN) {
  if (b.kind() != BarrierKind::LinearLower) throw ConfigError("not a linear lower barrier");
  const double R = b.coeff("R");
  if (xN >= R) return b.coeff("t0");
  if (xN <= 0.0) return 0.0;
  return b.profile(R - xN);
}

// ---------------------------------------------------------------------------
// Annulus barriers

Barrier build_annulus_barrier(int N, double p, double R, double u0, double CH) {
  if (N < 1) throw DomainError("build_annulus_barrier: N must be at least 1");
  if (!(p > 1.0)) throw DomainError("build_annulus_barrier: p must exceed 1");
  if (p > N) throw DomainError("build_annulus_barrier: requires p <= N");
  if (!(R > 0.0) || !(u0 > 0.0)) throw DomainError("build_annulus_barrier: R, u0 must be positive");
  if (!(CH > 1.0)) throw DomainError("build_annulus_barrier: Harnack constant must exceed 1");

  Params params;
  params.p = p;
  params.N = N;
  Profile prof;
  std::map<std::string, double> coeffs{{"R", R}, {"u0", u0}, {"CH", CH}};
  BarrierKind kind;
  if (p < N) {
    const double e = (N - p) / (p - 1.0);
    const double c = u0 / CH * std::pow(4.0 * R, e) / (std::pow(4.0, e) - 1.0);
    const double k = -std::pow(4.0 * R, -e);
    prof.value = [c, k, e](double r) { return c * (std::pow(r, -e) + k); };
    prof.slope = [c, e](double r) { return -c * e * std::pow(r, -e - 1.0); };
    coeffs["c"] = c;
    coeffs["k"] = k;
    kind = BarrierKind::Fundamental;
  } else {
    const double c = u0 / CH / std::log(4.0);
    const double k = std::log(4.0 * R);
    prof.value = [c, k](double r) { return c * (k - std::log(r)); };
    prof.slope = [c](double r) { return -c / r; };
    coeffs["c"] = c;
    coeffs["k"] = k;
    kind = BarrierKind::Logarithmic;
  }
  prof.rhs = [](double) { return 0.0; };
  Eigen::VectorXd center = along_axis(N, 4.0 * R);
  return Barrier(kind, Sense::Sub, params, std::move(coeffs),
                 Region{Region::Shape::Annulus, R, 4.0 * R}, N, std::move(center), std::move(prof),
                 FunctionSpec{});
}

// ---------------------------------------------------------------------------

Barrier build_v0_shift(const Params& params, double s, double epsilon) {
  params.validate();
  if (!(params.gamma > 1.0)) throw NonexistenceError("nonexistent (gamma<=1): v0 is undefined");
  if (!(s > 0.0)) throw DomainError("build_v0_shift: s must be positive");
  if (!(epsilon >= 0.0)) throw DomainError("build_v0_shift: epsilon must be nonnegative");
  const double coef = std::pow(s, params.gamma + params.p - 1.0);
  Profile prof;
  prof.value = [params, s, epsilon](double t) { return s * eval_v0(params, t + epsilon); };
  prof.slope = [params, s, epsilon](double t) { return s * eval_v0_prime(params, t + epsilon); };
  prof.rhs = [params, s, epsilon, coef](double t) {
    return coef / std::pow(s * eval_v0(params, t + epsilon), params.gamma);
  };
  std::map<std::string, double> coeffs{{"s", s}, {"epsilon", epsilon}, {"rhs_coefficient", coef}};
  return Barrier(BarrierKind::V0Shift, Sense::Super, params, std::move(coeffs),
                 Region{Region::Shape::Strip, 0.0, 1.0}, params.N, origin(params.N),
                 std::move(prof), singular_nonlinearity(params));
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Eigen::VectorXd> default_grid(const Barrier& b) {
  const int dim = b.dimension();
  std::vector<Eigen::VectorXd> grid;
  const Region& reg = b.region();
  switch (reg.shape) {
    case Region::Shape::Strip:
      for (double t : log_spaced(1e-3 * reg.outer, reg.outer, 200)) grid.push_back(along_axis(dim, t));
      break;
    case Region::Shape::Ball:
      for (double r : uniform(0.01 * reg.outer, 0.99 * reg.outer, 99)) {
        grid.push_back(along_axis(dim, r));
      }
      break;
    case Region::Shape::Annulus: {
      std::vector<Eigen::VectorXd> dirs;
      for (int i = 0; i < dim; ++i) {
        dirs.push_back(Eigen::VectorXd::Unit(dim, i));
        dirs.push_back(-Eigen::VectorXd::Unit(dim, i));
      }
      dirs.push_back(Eigen::VectorXd::Ones(dim).normalized());
      for (double r : uniform(1.05 * reg.inner, 0.99 * reg.outer, 20)) {
        for (const auto& d : dirs) grid.push_back(b.center() + r * d);
      }
      break;
    }
  }
  return grid;
}

BarrierReport validate_barrier(const Barrier& b) { return validate_barrier(b, default_grid(b)); }

BarrierReport validate_barrier(const Barrier& b, const std::vector<Eigen::VectorXd>& grid) {
  const double p = b.params().p;
  const bool tensor = b.region().shape == Region::Shape::Annulus;
  const int n = b.region().shape == Region::Shape::Ball ? b.dimension() : 1;
  const auto flux = [&](double s) {
    const double d = b.profile_slope(s);
    return std::pow(s, n - 1) * std::pow(std::abs(d), p - 2.0) * d;
  };
  const auto vector_flux = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd g = b.gradient(x);
    return std::pow(g.norm(), p - 2.0) * g;
  };

  BarrierReport rep;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  rep.domination_margin = std::numeric_limits<double>::infinity();
  const bool has_f = static_cast<bool>(b.nonlinearity().fn);
  for (const auto& x : grid) {
    const double s = b.coordinate(x);
    // Step scaled to the distance from the nearest point where w may be singular.
    const double reach =
        b.region().shape == Region::Shape::Ball ? std::min(s, b.region().outer - s) : s;
    const double h = 1e-4 * reach;
    double L = 0.0;
    if (tensor) {
      for (int i = 0; i < b.dimension(); ++i) {
        const Eigen::VectorXd e = 0.5 * h * Eigen::VectorXd::Unit(b.dimension(), i);
        L -= (vector_flux(x + e)[i] - vector_flux(x - e)[i]) / h;
      }
    } else {
      L = -(flux(s + 0.5 * h) - flux(s - 0.5 * h)) / h / std::pow(s, n - 1);
    }
    const double rhs = b.claimed_rhs(s);
    const double scale = 1.0 + std::abs(rhs);
    const double res = L - rhs;
    const double viol = (b.sense() == Sense::Super ? -res : res) / scale;
    rep.coordinate.push_back(s);
    rep.residual.push_back(res);
    rep.violation.push_back(viol);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(res) / scale);
    if (viol > rep.worst_violation) {
      rep.worst_violation = viol;
      rep.worst_at = s;
    }
    if (has_f) {
      const double f = b.nonlinearity()(b.profile(s));
      const double margin = b.sense() == Sense::Super ? rhs - f : f - rhs;
      rep.domination_margin =
          std::min(rep.domination_margin, margin / (1.0 + std::max(std::abs(f), std::abs(rhs))));
    }
  }
  if (!has_f) rep.domination_margin = std::numeric_limits<double>::quiet_NaN();
  if (grid.empty()) rep.worst_violation = 0.0;
  return rep;
}

}  // namespace splap
