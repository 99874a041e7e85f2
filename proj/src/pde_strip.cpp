#include "splap/pde_strip.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>

#include "splap/errors.hpp"
#include "splap/exact1d.hpp"
#include "splap/numerics.hpp"

namespace splap {

std::string to_string(TopBoundary::Kind kind) {
  switch (kind) {
    case TopBoundary::Kind::DirichletV0:
      return "v0";
    case TopBoundary::Kind::DirichletConst:
      return "const";
    case TopBoundary::Kind::NeumannSlope:
      return "slope";
  }
  return "?";
}

void StripProblem::validate() const {
  params.validate();
  if (params.N != 2) throw DomainError("strip solver is implemented for N = 2");
  if (!(height > 0.0)) throw DomainError("strip height must be positive");
  if (!(period > 0.0)) throw DomainError("lateral period must be positive");
  if (nx < 4) throw ConfigError("nx must be at least 4");
  if (ny < 8) throw ConfigError("ny must be at least 8");
  if (grading < 0.0) throw ConfigError("grading must be nonnegative");
  if (!(std::abs(lateral_amplitude) < 1.0)) throw ConfigError("lateral amplitude must be below 1");
  if (top.kind == TopBoundary::Kind::DirichletV0) {
    if (!(params.gamma > 1.0)) throw NonexistenceError("nonexistent (gamma<=1): no v0 top data");
    if (!(top.s > 0.0) || top.epsilon < 0.0) throw ConfigError("top data needs s > 0, epsilon >= 0");
  } else if (!(top.value > 0.0)) {
    throw ConfigError("top value must be positive");
  }
  if (!(solver.rtol > 0.0) || solver.stages < 1 || solver.max_newton < 1) {
    throw ConfigError("bad solver options");
  }
}

double StripProblem::grading_exponent() const {
  return grading > 0.0 ? grading : 2.0 / params.beta_u();
}

std::vector<double> StripProblem::x1_nodes() const {
  std::vector<double> x(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) x[static_cast<std::size_t>(i)] = period * i / nx;
  return x;
}

std::vector<double> StripProblem::x2_nodes() const {
  const double q = grading_exponent();
  std::vector<double> y(static_cast<std::size_t>(ny + 1));
  for (int j = 0; j <= ny; ++j) {
    y[static_cast<std::size_t>(j)] = height * std::pow(static_cast<double>(j) / ny, q);
  }
  y.back() = height;
  return y;
}

double StripProblem::top_data(double x1) const {
  const double mod = 1.0 + lateral_amplitude * std::cos(2.0 * std::numbers::pi * x1 / period);
  switch (top.kind) {
    case TopBoundary::Kind::DirichletV0:
      return mod * top.s * eval_v0(params, height + top.epsilon);
    case TopBoundary::Kind::DirichletConst:
    case TopBoundary::Kind::NeumannSlope:
      return mod * top.value;
  }
  return 0.0;
}

namespace {

// f = u^{-gamma} + g, extended linearly below u_min (u_min = 0: no clamp).
struct Reaction {
  const Params* params;
  double u_min = 0.0;

  double raw_f(double u) const { return std::pow(u, -params->gamma) + params->g.value(u); }
  double raw_fp(double u) const {
    return -params->gamma * std::pow(u, -params->gamma - 1.0) + params->g.derivative(u);
  }
  double raw_G(double u) const {
    const double g = params->gamma;
    const double sing = g == 1.0 ? std::log(u) : std::pow(u, 1.0 - g) / (1.0 - g);
    return sing + params->g.primitive(u);
  }

  double f(double u) const {
    if (u >= u_min) return raw_f(u);
    return raw_f(u_min) + raw_fp(u_min) * (u - u_min);
  }
  double fp(double u) const { return u >= u_min ? raw_fp(u) : raw_fp(u_min); }
  double G(double u) const {
    if (u >= u_min) return raw_G(u);
    const double d = u - u_min;
    return raw_G(u_min) + raw_f(u_min) * d + 0.5 * raw_fp(u_min) * d * d;
  }
};

struct Mesh {
  int nx, ny;
  double hx;
  std::vector<double> x1, y;
  bool neumann;
  int free_rows;  // rows 1..free_rows are unknown
  double layer;

  explicit Mesh(const StripProblem& prob)
      : nx(prob.nx),
        ny(prob.ny),
        hx(prob.period / prob.nx),
        x1(prob.x1_nodes()),
        y(prob.x2_nodes()),
        neumann(prob.top.kind == TopBoundary::Kind::NeumannSlope),
        free_rows(neumann ? prob.ny : prob.ny - 1),
        layer(prob.params.gamma * prob.params.beta_u()) {}

  int node(int j, int i) const { return j * nx + ((i % nx) + nx) % nx; }
  int unknown(int j, int i) const {
    if (j < 1 || j > free_rows) return -1;
    return (j - 1) * nx + ((i % nx) + nx) % nx;
  }
  int unknowns() const { return free_rows * nx; }
  double dy(int j) const { return y[static_cast<std::size_t>(j + 1)] - y[static_cast<std::size_t>(j)]; }
  // Mass of the hat of row j lumped against the boundary-layer weight
  // x2^{-a}, a = gamma beta_u: w_j = hx int (x2 / x2_j)^{-a} phi_j. Plain
  // lumping is off by O(1) in the first rows of a graded mesh.
  double weight(int j) const {
    const double yj = y[static_cast<std::size_t>(j)];
    double w = 0.0;
    for (int side : {-1, 1}) {
      const int k = j + side;
      if (k < 0 || k > ny) continue;
      const double yk = y[static_cast<std::size_t>(k)];
      const double h = std::abs(yk - yj);
      if (k == 0 && layer < 2.0) {
        w += yj / (2.0 - layer);
      } else if (k == 0) {
        w += 0.5 * h;
      } else {
        const auto hat = [&](double t) { return std::pow(t / yj, -layer) * std::abs(t - yk) / h; };
        w += numerics::gauss_panel(hat, std::min(yj, yk), std::max(yj, yk));
      }
    }
    return hx * w;
  }
};

struct Triangle {
  std::array<int, 3> nodes;
  std::array<Eigen::Vector2d, 3> grads;
  double area;
};

std::vector<Triangle> triangulate(const Mesh& m) {
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * m.nx * m.ny));
  for (int j = 0; j < m.ny; ++j) {
    const double h = m.dy(j);
    const double hx = m.hx;
    const double area = 0.5 * hx * h;
    for (int i = 0; i < m.nx; ++i) {
      const int a = m.node(j, i), b = m.node(j, i + 1), c = m.node(j + 1, i), d = m.node(j + 1, i + 1);
      tris.push_back({{a, b, d},
                      {Eigen::Vector2d(-1.0 / hx, 0.0), Eigen::Vector2d(1.0 / hx, -1.0 / h),
                       Eigen::Vector2d(0.0, 1.0 / h)},
                      area});
      tris.push_back({{a, d, c},
                      {Eigen::Vector2d(0.0, -1.0 / h), Eigen::Vector2d(1.0 / hx, 0.0),
                       Eigen::Vector2d(-1.0 / hx, 1.0 / h)},
                      area});
    }
  }
  return tris;
}

struct System {
  const StripProblem& prob;
  Mesh mesh;
  std::vector<Triangle> tris;
  std::vector<int> node_unknown;   // node -> unknown index or -1
  std::vector<double> node_weight;
  std::vector<double> top_flux;    // Neumann flux per column

  explicit System(const StripProblem& p) : prob(p), mesh(p), tris(triangulate(mesh)) {
    const int nodes = (mesh.ny + 1) * mesh.nx;
    node_unknown.assign(static_cast<std::size_t>(nodes), -1);
    node_weight.assign(static_cast<std::size_t>(nodes), 0.0);
    for (int j = 0; j <= mesh.ny; ++j) {
      for (int i = 0; i < mesh.nx; ++i) {
        node_unknown[static_cast<std::size_t>(mesh.node(j, i))] = mesh.unknown(j, i);
        node_weight[static_cast<std::size_t>(mesh.node(j, i))] = mesh.weight(j);
      }
    }
    if (mesh.neumann) {
      const double p_exp = prob.params.p;
      for (int i = 0; i < mesh.nx; ++i) {
        const double s = prob.top_data(mesh.x1[static_cast<std::size_t>(i)]);
        top_flux.push_back(std::pow(std::abs(s), p_exp - 2.0) * s * mesh.hx);
      }
    }
  }

  Eigen::VectorXd initial_nodes() const {
    const double beta = prob.params.beta_u();
    Eigen::VectorXd u((mesh.ny + 1) * mesh.nx);
    for (int j = 0; j <= mesh.ny; ++j) {
      const double eta = mesh.y[static_cast<std::size_t>(j)] / prob.height;
      for (int i = 0; i < mesh.nx; ++i) {
        const double x = mesh.x1[static_cast<std::size_t>(i)];
        double top = prob.top_data(x);
        if (mesh.neumann) top = std::max(top * prob.height, 1e-3) / beta;
        u[mesh.node(j, i)] = top * std::pow(eta, beta);
      }
    }
    return u;
  }

  struct Eval {
    double energy = 0.0;
    Eigen::VectorXd grad;
    Eigen::VectorXd scale;
    std::vector<Eigen::Triplet<double>> triplets;
  };

  // Energy, gradient and (optionally) Hessian over the unknowns.
  Eval evaluate(const Eigen::VectorXd& u, double delta, const Reaction& rx, bool hessian) const {
    const double p = prob.params.p;
    Eval ev;
    ev.grad = Eigen::VectorXd::Zero(mesh.unknowns());
    ev.scale = Eigen::VectorXd::Zero(mesh.unknowns());
    if (hessian) ev.triplets.reserve(tris.size() * 9 + static_cast<std::size_t>(mesh.unknowns()));
    const double d2 = delta * delta;
    for (const auto& t : tris) {
      Eigen::Vector2d g = Eigen::Vector2d::Zero();
      for (int a = 0; a < 3; ++a) g += u[t.nodes[static_cast<std::size_t>(a)]] * t.grads[static_cast<std::size_t>(a)];
      const double s2 = g.squaredNorm() + d2;
      const double coef = std::pow(s2, 0.5 * (p - 2.0));
      ev.energy += t.area / p * s2 * coef;
      std::array<int, 3> idx;
      std::array<double, 3> gd;
      for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        idx[ua] = node_unknown[static_cast<std::size_t>(t.nodes[ua])];
        gd[ua] = g.dot(t.grads[ua]);
        if (idx[ua] < 0) continue;
        ev.grad[idx[ua]] += t.area * coef * gd[ua];
        ev.scale[idx[ua]] += t.area * coef * std::abs(gd[ua]);
      }
      if (!hessian) continue;
      const double coef2 = (p - 2.0) * std::pow(s2, 0.5 * (p - 4.0));
      for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        if (idx[ua] < 0) continue;
        for (int b = 0; b < 3; ++b) {
          const auto ub = static_cast<std::size_t>(b);
          if (idx[ub] < 0) continue;
          const double hab =
              t.area * (coef * t.grads[ua].dot(t.grads[ub]) + coef2 * gd[ua] * gd[ub]);
          ev.triplets.emplace_back(idx[ua], idx[ub], hab);
        }
      }
    }
    for (std::size_t n = 0; n < node_unknown.size(); ++n) {
      const int k = node_unknown[n];
      if (k < 0) continue;
      const double w = node_weight[n];
      const double un = u[static_cast<Eigen::Index>(n)];
      ev.energy -= w * rx.G(un);
      const double fv = rx.f(un);
      ev.grad[k] -= w * fv;
      ev.scale[k] += w * std::abs(fv);
      if (hessian) ev.triplets.emplace_back(k, k, -w * rx.fp(un));
    }
    if (mesh.neumann) {
      for (int i = 0; i < mesh.nx; ++i) {
        const int k = mesh.unknown(mesh.ny, i);
        const double fl = top_flux[static_cast<std::size_t>(i)];
        ev.energy -= fl * u[mesh.node(mesh.ny, i)];
        ev.grad[k] -= fl;
        ev.scale[k] += std::abs(fl);
      }
    }
    return ev;
  }

  double normalized_residual(const Eval& ev) const {
    double r = 0.0;
    for (Eigen::Index k = 0; k < ev.grad.size(); ++k) {
      r = std::max(r, std::abs(ev.grad[k]) / (ev.scale[k] + std::numeric_limits<double>::min()));
    }
    return r;
  }

  void scatter(Eigen::VectorXd& u, const Eigen::VectorXd& step, double t) const {
    for (std::size_t n = 0; n < node_unknown.size(); ++n) {
      const int k = node_unknown[n];
      if (k >= 0) u[static_cast<Eigen::Index>(n)] += t * step[k];
    }
  }
};

std::string format_trace(const std::vector<StageRecord>& path) {
  std::ostringstream os;
  for (const auto& s : path) {
    os << "\n  stage delta=" << s.delta << " u_min=" << s.u_min << " iterations=" << s.iterations
       << " residual=" << s.residual;
  }
  return os.str();
}

Field2D to_field(const StripProblem& prob, const Mesh& mesh, const Eigen::VectorXd& u) {
  Field2D field;
  field.problem = prob;
  field.x1 = mesh.x1;
  field.x2 = mesh.y;
  field.values.resize(mesh.ny + 1, mesh.nx);
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) field.values(j, i) = u[mesh.node(j, i)];
  }
  return field;
}

}  // namespace

Field2D solve(const StripProblem& prob) {
  prob.validate();
  const System sys(prob);
  const Mesh& mesh = sys.mesh;
  Eigen::VectorXd u = sys.initial_nodes();

  const double beta = prob.params.beta_u();
  const double floor = 0.01 * std::pow(mesh.y[1], beta);
  const double top_scale = std::max(u.maxCoeff(), floor);
  const int K = prob.solver.stages;

  std::vector<StageRecord> path;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseMatrix<double> H(mesh.unknowns(), mesh.unknowns());
  bool analysed = false;
  int total_iterations = 0;

  const auto run_stage = [&](double delta, double u_min, double tol, bool final_stage) {
    const Reaction rx{&prob.params, u_min};
    StageRecord rec{delta, u_min, 0, 0.0};
    for (int it = 0;; ++it) {
      System::Eval ev = sys.evaluate(u, delta, rx, true);
      rec.residual = sys.normalized_residual(ev);
      rec.iterations = it;
      if (rec.residual <= tol) break;
      if (it >= prob.solver.max_newton) {
        path.push_back(rec);
        if (!final_stage) return;  // continue the continuation from here
        throw SolveError("Newton stagnated; continuation trace:" + format_trace(path));
      }
      H.setFromTriplets(ev.triplets.begin(), ev.triplets.end());
      if (!analysed) {
        ldlt.analyzePattern(H);
        analysed = true;
      }
      ldlt.factorize(H);
      Eigen::VectorXd step;
      double shift = 0.0;
      for (int attempt = 0;; ++attempt) {
        if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) {
          step = ldlt.solve(-ev.grad);
          if (step.dot(ev.grad) < 0.0) break;
        }
        if (attempt > 30) throw SolveError("Hessian could not be regularised" + format_trace(path));
        shift = shift == 0.0 ? 1e-8 * H.diagonal().cwiseAbs().maxCoeff() : 10.0 * shift;
        Eigen::SparseMatrix<double> I(H.rows(), H.cols());
        I.setIdentity();
        ldlt.factorize(H + shift * I);
      }
      const double slope = step.dot(ev.grad);
      double t = 1.0;
      for (;;) {
        Eigen::VectorXd trial = u;
        sys.scatter(trial, step, t);
        const double e = sys.evaluate(trial, delta, rx, false).energy;
        const double noise = 1e-13 * (std::abs(ev.energy) + 1.0);
        if (std::isfinite(e) && (e <= ev.energy + 1e-4 * t * slope || std::abs(slope) * t < noise)) {
          u = std::move(trial);
          break;
        }
        t *= 0.5;
        if (t < 1e-12) {
          path.push_back(rec);
          throw SolveError("line search failed; continuation trace:" + format_trace(path));
        }
      }
      ++total_iterations;
    }
    path.push_back(rec);
  };

  for (int k = 0; k < K; ++k) {
    const double frac = K == 1 ? 1.0 : static_cast<double>(k) / (K - 1);
    const double delta = prob.solver.delta_start *
                         std::pow(prob.solver.delta_min / prob.solver.delta_start, frac);
    const double u_min = 0.1 * top_scale * std::pow(floor / (0.1 * top_scale), frac);
    const bool last = k + 1 == K;
    run_stage(delta, u_min, last ? prob.solver.rtol : std::max(prob.solver.rtol, 1e-6), last);
  }

  Field2D field = to_field(prob, mesh, u);
  field.path = path;
  field.iterations = total_iterations;
  for (int j = 1; j <= mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      if (!(field.values(j, i) > 0.0)) {
        std::ostringstream os;
        os << "nonpositive value " << field.values(j, i) << " at node (" << i << ", " << j << ")"
           << format_trace(path);
        throw PositivityError(os.str());
      }
    }
  }
  field.final_residual = residual(field);
  if (field.final_residual > 10.0 * prob.solver.rtol) {
    // delta_min perturbs the flux; one unregularised polish where p allows it.
    const double delta = prob.params.p >= 2.0 ? 0.0 : 1e-3 * prob.solver.delta_min;
    run_stage(delta, floor, prob.solver.rtol, true);
    field = to_field(prob, mesh, u);
    field.path = path;
    field.iterations = total_iterations;
    field.final_residual = residual(field);
  }
  return field;
}

Field2D make_profile_field(const StripProblem& prob,
                           const std::function<double(double, double)>& fn) {
  prob.validate();
  const Mesh mesh(prob);
  Eigen::VectorXd u((mesh.ny + 1) * mesh.nx);
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      u[mesh.node(j, i)] = fn(mesh.x1[static_cast<std::size_t>(i)], mesh.y[static_cast<std::size_t>(j)]);
    }
  }
  return to_field(prob, mesh, u);
}

double residual(const Field2D& field) {
  const System sys(field.problem);
  const Mesh& mesh = sys.mesh;
  if (field.rows() != mesh.ny + 1 || field.cols() != mesh.nx) {
    throw DomainError("field shape does not match its problem");
  }
  Eigen::VectorXd u((mesh.ny + 1) * mesh.nx);
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const double v = field.values(j, i);
      if (j > 0 && !(v > 0.0)) {
        std::ostringstream os;
        os << "residual: nonpositive value " << v << " at node (" << i << ", " << j << ")";
        throw PositivityError(os.str());
      }
      u[mesh.node(j, i)] = v;
    }
  }
  const Reaction rx{&field.problem.params, 0.0};
  return sys.normalized_residual(sys.evaluate(u, 0.0, rx, false));
}

// ---------------------------------------------------------------------------
// Diagnostics on fields

std::pair<double, double> default_window(const Field2D& field) {
  return {field.x2[5], 0.1 * field.problem.height};
}

BoundsReport check_bounds(const Field2D& field, double C_lo, double C_hi) {
  const auto [lo, hi] = default_window(field);
  return check_bounds(field, C_lo, C_hi, lo, hi);
}

BoundsReport check_bounds(const Field2D& field, double C_lo, double C_hi, double window_lo,
                          double window_hi) {
  if (!(window_hi > window_lo) || window_hi > field.problem.height) {
    throw RangeError("check_bounds: window outside the strip");
  }
  const double beta = field.problem.params.beta_u();
  BoundsReport rep;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.c = std::numeric_limits<double>::infinity();
  rep.C = 0.0;
  for (int j = 2; j < field.rows(); ++j) {
    const double y = field.x2[static_cast<std::size_t>(j)];
    if (y < window_lo || y > window_hi) continue;
    const double scale = std::pow(y, beta);
    for (int i = 0; i < field.cols(); ++i) {
      const double ratio = field.values(j, i) / scale;
      rep.c = std::min(rep.c, ratio);
      rep.C = std::max(rep.C, ratio);
      ++rep.samples;
    }
  }
  if (rep.samples == 0) throw RangeError("check_bounds: no mesh rows inside the window");
  rep.pass = rep.c >= C_lo && rep.C <= C_hi;
  return rep;
}

double monotonicity_check(const Field2D& field) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < field.cols(); ++i) {
    for (int j = 0; j + 1 < field.rows(); ++j) {
      const double dy = field.x2[static_cast<std::size_t>(j + 1)] - field.x2[static_cast<std::size_t>(j)];
      m = std::min(m, (field.values(j + 1, i) - field.values(j, i)) / dy);
    }
  }
  return m;
}

double lateral_variation(const Field2D& field) {
  double v = 0.0;
  for (int j = 0; j < field.rows(); ++j) {
    v = std::max(v, field.values.row(j).maxCoeff() - field.values.row(j).minCoeff());
  }
  return v;
}

namespace {

// Graded coordinate in which nodes are uniform: s = ny (x2 / height)^{1/q}.
double graded_index(const Field2D& field, double x2) {
  const auto& prob = field.problem;
  return prob.ny * std::pow(std::max(x2, 0.0) / prob.height, 1.0 / prob.grading_exponent());
}

std::vector<numerics::HermiteSpline> column_splines(const Field2D& field) {
  std::vector<double> s(static_cast<std::size_t>(field.rows()));
  for (int j = 0; j < field.rows(); ++j) s[static_cast<std::size_t>(j)] = j;
  std::vector<numerics::HermiteSpline> out;
  out.reserve(static_cast<std::size_t>(field.cols()));
  for (int i = 0; i < field.cols(); ++i) {
    std::vector<double> col(field.values.col(i).data(), field.values.col(i).data() + field.rows());
    out.push_back(numerics::HermiteSpline::pchip(s, std::move(col)));
  }
  return out;
}

// Periodic four-point Lagrange across columns of column-wise values.
template <class ColumnValue>
double lateral_lagrange(const Field2D& field, double x1, ColumnValue&& column_value) {
  const int nx = field.cols();
  const double hx = field.problem.period / nx;
  const double t = x1 / hx;
  const double base = std::floor(t);
  const double frac = t - base;
  if (frac == 0.0) return column_value(static_cast<int>(base));
  double sum = 0.0;
  for (int k = -1; k <= 2; ++k) {
    double w = 1.0;
    for (int m = -1; m <= 2; ++m) {
      if (m != k) w *= (frac - m) / static_cast<double>(k - m);
    }
    const int i = ((static_cast<int>(base) + k) % nx + nx) % nx;
    sum += w * column_value(i);
  }
  return sum;
}

void check_inside(const Field2D& field, double x2) {
  if (x2 < 0.0 || x2 > field.problem.height * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "x2 = " << x2 << " outside the strip (0, " << field.problem.height << ")";
    throw RangeError(os.str());
  }
}

}  // namespace

double interpolate(const Field2D& field, double x1, double x2) {
  check_inside(field, x2);
  const double s = graded_index(field, x2);
  return lateral_lagrange(field, x1, [&](int i) {
    const std::span<const double> col(field.values.col(i).data(), static_cast<std::size_t>(field.rows()));
    return numerics::lagrange4_uniform(col, s);
  });
}

double interpolate_column(const Field2D& field, int i, double x2) {
  check_inside(field, x2);
  if (i < 0 || i >= field.cols()) throw RangeError("column index out of range");
  std::vector<double> s(static_cast<std::size_t>(field.rows()));
  for (int j = 0; j < field.rows(); ++j) s[static_cast<std::size_t>(j)] = j;
  std::vector<double> col(field.values.col(i).data(), field.values.col(i).data() + field.rows());
  return numerics::HermiteSpline::pchip(std::move(s), std::move(col))(graded_index(field, x2));
}

double reflection_compare(const Field2D& field, double lam) {
  if (!(lam > 0.0) || 2.0 * lam > field.problem.height * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "reflection_compare: need 0 < 2 lam <= height, got lam = " << lam;
    throw RangeError(os.str());
  }
  const auto splines = column_splines(field);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < field.cols(); ++i) {
    for (int j = 0; j < field.rows(); ++j) {
      const double y = field.x2[static_cast<std::size_t>(j)];
      if (y >= lam) break;
      const double reflected = splines[static_cast<std::size_t>(i)](graded_index(field, 2.0 * lam - y));
      worst = std::max(worst, field.values(j, i) - reflected);
    }
  }
  return worst;
}

double sliding_compare(const Field2D& field, const Eigen::Vector2d& nu, double lam) {
  if (std::abs(nu.norm() - 1.0) > 1e-12 || !(nu[1] > 0.0)) {
    throw RangeError("sliding_compare: nu must be a unit vector with positive last component");
  }
  if (!(lam > 0.0)) throw RangeError("sliding_compare: lam must be positive");
  const double H = field.problem.height;
  const auto splines = column_splines(field);
  double worst = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int j = 0; j < field.rows(); ++j) {
    const double y = field.x2[static_cast<std::size_t>(j)];
    const double ys = y + lam * nu[1];
    if (ys > H * (1.0 + 1e-12)) break;
    const double s = graded_index(field, std::min(ys, H));
    for (int i = 0; i < field.cols(); ++i) {
      const double xs = field.x1[static_cast<std::size_t>(i)] + lam * nu[0];
      const double shifted = lateral_lagrange(
          field, xs, [&](int c) { return splines[static_cast<std::size_t>(c)](s); });
      worst = std::max(worst, field.values(j, i) - shifted);
      any = true;
    }
  }
  if (!any) throw RangeError("sliding_compare: translate leaves the strip everywhere");
  return worst;
}

void write_field_csv(const Field2D& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "x1,x2,u\n";
  char buf[96];
  for (int i = 0; i < field.cols(); ++i) {
    for (int j = 0; j < field.rows(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", field.x1[static_cast<std::size_t>(i)],
                    field.x2[static_cast<std::size_t>(j)], field.values(j, i));
      out << buf;
    }
  }
}

}  // namespace splap
