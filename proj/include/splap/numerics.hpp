#pragma once

// Small numerical kernels shared by the solution families: Gauss-Legendre
// panels, graded adaptive quadrature, safeguarded root finding, an embedded
// Dormand-Prince integrator and monotone cubic Hermite interpolation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "splap/errors.hpp"

namespace splap::numerics {

/// Gauss-Legendre rule on [-1, 1] computed by Golub-Welsch.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussRule gauss_legendre(int n);

/// Cached 16-point rule.
const GaussRule& gauss16();

using ScalarFn = std::function<double(double)>;

/// Fixed-order Gauss-Legendre on one panel.
double gauss_panel(const ScalarFn& f, double a, double b, const GaussRule& rule = gauss16());

struct QuadratureOptions {
  double rel_tol = 1e-15;
  double abs_tol = 1e-300;
  int max_depth = 30;
};

/// Adaptive bisection of [a, b] with 16-point panels. Throws QuadratureError
/// naming the worst panel if the tolerance cannot be met.
double adaptive_integral(const ScalarFn& f, double a, double b,
                         const QuadratureOptions& opts = {});

/// Integral over [a, b] of an integrand behaving like s^alpha near s = 0.
/// Panels are graded geometrically towards the origin; the innermost panel
/// is placed where its contribution s^(alpha+1) falls below the tolerance.
double graded_integral(const ScalarFn& f, double a, double b, double alpha,
                       const QuadratureOptions& opts = {});

struct RootOptions {
  double x_tol = 0.0;      // absolute tolerance on x (0 = machine level)
  double f_tol = 0.0;      // absolute tolerance on residual
  int max_iter = 200;
};

/// Safeguarded Newton on a bracket [lo, hi] with g(lo) <= 0 <= g(hi) for an
/// increasing g. Falls back to bisection whenever Newton leaves the bracket.
double safeguarded_newton(const ScalarFn& g, const ScalarFn& dg, double lo, double hi,
                          const RootOptions& opts = {});

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  double h_initial = 0.0;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;
};

template <int Dim>
struct OdeResult {
  double t = 0.0;
  Eigen::Matrix<double, Dim, 1> y;
  bool stopped = false;  // observer requested stop
  long steps = 0;
};

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0). After every accepted
/// step `stop(t, y)` may return true to terminate early.
template <int Dim, class Rhs, class Stop>
OdeResult<Dim> dopri5(Rhs&& rhs, double t0, double t1, Eigen::Matrix<double, Dim, 1> y,
                      const OdeOptions& opts, Stop&& stop) {
  using V = Eigen::Matrix<double, Dim, 1>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeResult<Dim> out;
  double t = t0;
  const double span = t1 - t0;
  double h = opts.h_initial > 0.0 ? opts.h_initial : span * 1e-3;
  h = std::min({h, span, opts.h_max});
  V k1 = rhs(t, y);
  while (t < t1) {
    if (++out.steps > opts.max_steps) throw SolveError("dopri5: step limit exceeded");
    if (t + h > t1) h = t1 - t;
    const V k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
    const V k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const V k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const V k5 = rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const V k6 =
        rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    const V y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const V k7 = rhs(t + h, y_new);
    const V err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_norm = std::max(err_norm, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(err_norm)) {
      h *= 0.25;
      if (h < 1e-300) throw SolveError("dopri5: non-finite state");
      continue;
    }
    if (err_norm <= 1.0) {
      t = (t + h >= t1) ? t1 : t + h;
      y = y_new;
      k1 = k7;
      if (stop(t, y)) {
        out.stopped = true;
        break;
      }
    }
    const double factor =
        err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    h = std::min(h * factor, opts.h_max);
    if (h < 1e-15 * std::max(1.0, std::abs(t))) throw SolveError("dopri5: step size underflow");
  }
  out.t = t;
  out.y = y;
  return out;
}

template <int Dim, class Rhs>
OdeResult<Dim> dopri5(Rhs&& rhs, double t0, double t1, Eigen::Matrix<double, Dim, 1> y,
                      const OdeOptions& opts = {}) {
  return dopri5<Dim>(std::forward<Rhs>(rhs), t0, t1, std::move(y), opts,
                     [](double, const Eigen::Matrix<double, Dim, 1>&) { return false; });
}

// ---------------------------------------------------------------------------
// Interpolation

/// Cubic Hermite through (x_i, y_i) with slopes d_i. When `monotone` is set the
/// slopes are limited (Fritsch-Carlson) so monotone data stay monotone.
class HermiteSpline {
 public:
  HermiteSpline() = default;
  HermiteSpline(std::vector<double> x, std::vector<double> y, std::vector<double> d,
                bool monotone);
  /// PCHIP: slopes estimated from the data.
  static HermiteSpline pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double derivative(double t) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double t) const;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

/// Four-point Lagrange interpolation on a uniform grid (spacing 1, origin 0)
/// of `values`, clamped stencils at the ends.
double lagrange4_uniform(std::span<const double> values, double s);

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace splap::numerics
