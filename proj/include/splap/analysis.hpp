#pragma once

// Diagnostics on profiles and strip fields: power-law fits near x_N = 0,
// directional gradient blow-up, blow-up rescaling, the Kelvin transform for
// p = N, the constants of the two monotonicity inequalities for the vector
// field |xi|^{p-2} xi, and difference-quotient suprema of decreasing functions.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "splap/params.hpp"
#include "splap/pde_strip.hpp"

namespace splap {

struct FitResult {
  double exponent = 0.0;
  double constant = 0.0;
  double rms_residual = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t samples = 0;
};

/// Least squares of log(value) against log(x) over samples with x in [lo, hi].
/// DomainError on a nonpositive sample in the window or fewer than 8 samples.
FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& values, double lo,
                       double hi);

struct GradientScan {
  Eigen::Vector2d direction;
  FitResult fit;
  /// min / max of (d u / d eta) x_N^{-beta_grad} over the samples.
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<double> x2;
  std::vector<double> derivative;
};

/// Directional derivative d u / d eta (central differences, step 1e-4 x_N) at
/// every node of the window, fitted against x_N. DomainError if some
/// direction has eta_N < beta or is not a unit vector.
std::vector<GradientScan> gradient_blowup_scan(const Field2D& field, double beta,
                                               const std::vector<Eigen::Vector2d>& directions,
                                               double window_lo, double window_hi);
std::vector<GradientScan> gradient_blowup_scan(const Field2D& field, double beta,
                                               const std::vector<Eigen::Vector2d>& directions);

/// Coefficient eps^{gamma p/(gamma+p-1)} in front of g in the rescaled equation.
double scaling_coefficient(const Params& params, double eps);

struct ScaledSamples {
  std::vector<double> t;
  std::vector<double> w;
  double coefficient = 0.0;
};

/// w(t) = eps^{-beta_u} u(eps t) at the given t. RangeError if eps t leaves [0, t_max].
ScaledSamples scaling_blowup(const std::function<double(double)>& u, double t_max, double eps,
                             const Params& params, const std::vector<double>& t);

/// The same map applied to a strip field: nodes divided by eps, values by
/// eps^{beta_u}. The perturbation g is carried over as eps^{gamma beta} g(eps^beta w)
/// (constant and linear g only; DomainError otherwise).
Field2D scaling_blowup(const Field2D& field, double eps);

using PointFunction = std::function<double(const Eigen::VectorXd&)>;

/// u(x / |x|^2). DomainError if p != N.
PointFunction kelvin_transform(PointFunction u, const Params& params);
/// Transformed values at the sample points; DomainError at the origin.
std::vector<double> kelvin_transform(const PointFunction& u, const Params& params,
                                     const std::vector<Eigen::VectorXd>& points);

/// Finite-difference value of -Delta_p u at x (central fluxes with step h,
/// Richardson-extrapolated from h and h / 2).
double p_laplacian(const PointFunction& u, double p, const Eigen::VectorXd& x, double h = 1e-3);

/// max over points of |-Delta_N u - rhs| / (1 + |rhs|), with rhs = 0
/// (with_source false) or |x|^{-2N} u^{-gamma}.
double kelvin_residual(const PointFunction& u, const Params& params,
                       const std::vector<Eigen::VectorXd>& points, bool with_source,
                       double h = 1e-3);

/// Sample points r (cos t, sin t) on r in [r_lo, r_hi], t in [t_lo, t_hi]
/// (first two coordinates; the others zero, the last one carrying sin t).
std::vector<Eigen::VectorXd> annulus_grid(int N, double r_lo, double r_hi, double t_lo,
                                          double t_hi, int nr, int nt);

struct IneqConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  std::size_t pairs = 0;
  std::size_t skipped = 0;
};

/// Ratio of the two sides of the lower (monotonicity) and upper (Lipschitz)
/// inequality for one pair; NaN when |xi| + |xi'| = 0 or xi = xi'.
double ineq_lower_ratio(const Eigen::VectorXd& xi, const Eigen::VectorXd& xi2, double p);
double ineq_upper_ratio(const Eigen::VectorXd& xi, const Eigen::VectorXd& xi2, double p);

/// inf of the lower ratio and sup of the upper one over `trials` random pairs
/// (log-uniform radii on [1e-3, 1e3], uniform directions) and a fixed set of
/// collinear and nearly coincident probe pairs. DomainError if trials < 1e4.
IneqConstants estimate_ineq_constants(double p, int N, int trials, std::uint64_t seed);

/// Number of fresh random pairs violating the inequalities with the given constants
/// (relative slack 1e-9).
std::size_t count_ineq_violations(double p, int N, const IneqConstants& c, int pairs,
                                  std::uint64_t seed);

/// Brute-force sup of (g(t2) - g(t1)) / (t2 - t1) over t1, t2 in [l1, l2],
/// t2 - t1 >= eps, on a uniform grid of `points` nodes (plus the pairs at
/// distance exactly eps). DomainError if l2 - l1 < eps.
double decreasing_quotient_sup(const std::function<double(double)>& g, double l1, double l2,
                               double eps, int points = 2001);

}  // namespace splap
