#pragma once

// -Delta_p u = u^{-gamma} + g(u) on the strip (0, L) x (0, lambda), u = 0 on
// x_2 = 0, periodic in x_1, Dirichlet or slope data on x_2 = lambda.
//
// Discretisation: P1 elements on a graded tensor mesh, each cell split into two
// triangles along its (i, j)-(i+1, j+1) diagonal, lumped reaction term. The
// discrete equations are the gradient of
//   E(u) = sum_T |T| (|grad u|^2 + delta^2)^{p/2} / p - sum_j w_j G(u_j) - (top flux term),
// G' = f, which is convex whenever f is decreasing; Newton minimises it.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "splap/params.hpp"

namespace splap {

struct TopBoundary {
  enum class Kind { DirichletV0, DirichletConst, NeumannSlope };
  Kind kind = Kind::DirichletV0;
  /// DirichletV0: u = s v0(lambda + epsilon).
  double s = 1.0;
  double epsilon = 0.0;
  /// DirichletConst: u = value. NeumannSlope: du/dx_2 = value.
  double value = 1.0;
};

std::string to_string(TopBoundary::Kind kind);

struct SolverOptions {
  double rtol = 1e-9;
  double delta_start = 1e-1;
  double delta_min = 1e-6;
  int stages = 6;
  int max_newton = 80;
};

struct StripProblem {
  Params params;
  double height = 1.0;
  double period = 1.0;
  /// Cells across the period and along x_2.
  int nx = 32;
  int ny = 128;
  /// Nodes at x_2 = height (j / ny)^grading; 0 selects 2 (gamma + p - 1) / p.
  double grading = 0.0;
  TopBoundary top;
  /// Relative amplitude of the cos(2 pi x_1 / L) modulation of the top data.
  double lateral_amplitude = 0.0;
  SolverOptions solver;

  /// Throws DomainError/ConfigError for malformed problems.
  void validate() const;
  double grading_exponent() const;
  /// Node coordinates.
  std::vector<double> x1_nodes() const;
  std::vector<double> x2_nodes() const;
  /// Boundary value (Dirichlet) or slope (Neumann) at the top, at lateral position x1.
  double top_data(double x1) const;
};

struct StageRecord {
  double delta = 0.0;
  double u_min = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Nodal solution; values(j, i) at (x1[i], x2[j]). Row 0 is the bottom.
struct Field2D {
  StripProblem problem;
  std::vector<double> x1;
  std::vector<double> x2;
  Eigen::MatrixXd values;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<StageRecord> path;

  double at(int j, int i) const { return values(j, i); }
  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
};

/// Damped Newton with continuation in the gradient regularisation delta and
/// the lower clamp of the singular term. SolveError on stagnation (with the
/// continuation trace), PositivityError if the converged field is not positive.
Field2D solve(const StripProblem& prob);

/// Field with nodal values u(x1, x2) on the problem mesh (no solve).
Field2D make_profile_field(const StripProblem& prob,
                           const std::function<double(double, double)>& u);

/// Max over free nodes of the discrete weak-form defect (delta = 0, no clamp),
/// each relative to the sum of magnitudes of its contributions.
/// PositivityError if u <= 0 at an interior node.
double residual(const Field2D& field);

struct BoundsReport {
  double c = 0.0;
  double C = 0.0;
  bool pass = false;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t samples = 0;
};

/// Tightest c, C with c x_2^beta <= u <= C x_2^beta on the window (first node
/// row excluded), and whether C_lo <= c and C <= C_hi.
BoundsReport check_bounds(const Field2D& field, double C_lo, double C_hi, double window_lo,
                          double window_hi);
BoundsReport check_bounds(const Field2D& field, double C_lo, double C_hi);

/// Default analysis window (x2[5], 0.1 height).
std::pair<double, double> default_window(const Field2D& field);

/// Minimum forward difference quotient in x_2 over all columns.
double monotonicity_check(const Field2D& field);

/// max over x_2 < lam of u - u(., 2 lam - x_2). RangeError if 2 lam > height.
double reflection_compare(const Field2D& field, double lam);

/// max of u(x) - u(x + lam nu) over nodes whose translate stays in the strip.
/// nu = (nu_1, nu_2) unit, nu_2 > 0. RangeError on bad geometry.
double sliding_compare(const Field2D& field, const Eigen::Vector2d& nu, double lam);

/// Interpolated value (cubic Lagrange in the graded coordinate and laterally).
double interpolate(const Field2D& field, double x1, double x2);
/// Monotone (PCHIP) interpolation along column i.
double interpolate_column(const Field2D& field, int i, double x2);

/// max over rows of (max_i u - min_i u).
double lateral_variation(const Field2D& field);

/// CSV with header x1,x2,u.
void write_field_csv(const Field2D& field, const std::string& path);

}  // namespace splap
