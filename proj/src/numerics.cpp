#include "splap/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace splap::numerics {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  // Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

const GaussRule& gauss16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

double gauss_panel(const ScalarFn& f, double a, double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

namespace {

struct PanelFailure {
  double lo;
  double hi;
  double err;
  long panels = 0;
};

constexpr long kPanelBudget = 200'000;

double adaptive_panel(const ScalarFn& f, double a, double b, double whole, double tol,
                      int depth, PanelFailure& worst) {
  const double m = 0.5 * (a + b);
  const double left = gauss_panel(f, a, m);
  const double right = gauss_panel(f, m, b);
  const double refined = left + right;
  const double err = std::abs(refined - whole);
  if (!std::isfinite(refined)) {
    std::ostringstream os;
    os << "non-finite integrand on [" << a << ", " << b << "]";
    throw QuadratureError(os.str(), a, b);
  }
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(refined);
  if (++worst.panels > kPanelBudget) depth = 0;
  if (err <= tol || err <= floor || depth <= 0) {
    if (err > tol && err > worst.err) {
      worst.lo = a;
      worst.hi = b;
      worst.err = err;
    }
    return refined;
  }
  return adaptive_panel(f, a, m, left, 0.5 * tol, depth - 1, worst) +
         adaptive_panel(f, m, b, right, 0.5 * tol, depth - 1, worst);
}

[[noreturn]] void fail(const PanelFailure& worst) {
  std::ostringstream os;
  os << "quadrature tolerance not met; worst subinterval [" << worst.lo << ", " << worst.hi
     << "] error estimate " << worst.err;
  throw QuadratureError(os.str(), worst.lo, worst.hi);
}

}  // namespace

double adaptive_integral(const ScalarFn& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  const double whole = gauss_panel(f, a, b);
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(whole));
  PanelFailure worst{a, b, 0.0, 0};
  const double value = adaptive_panel(f, a, b, whole, tol, opts.max_depth, worst);
  if (worst.err > std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(value))) {
    fail(worst);
  }
  return value;
}

double graded_integral(const ScalarFn& f, double a, double b, double alpha,
                       const QuadratureOptions& opts) {
  if (b <= a) return 0.0;
  constexpr double ratio = 3.0;
  // Innermost panel [0, s0]: its contribution scales like s0^(alpha+1) relative
  // to the full integral, so pick s0 where that drops below the tolerance.
  double lo = a;
  double total = 0.0;
  if (a == 0.0) {
    const double s0 = b * std::pow(opts.rel_tol, 1.0 / (alpha + 1.0));
    total += gauss_panel(f, 0.0, s0);
    lo = s0;
  }
  // Geometric panels [lo, 3 lo], [3 lo, 9 lo], ... keep the distance to the
  // singular point comparable to the panel length.
  std::vector<double> cuts{lo};
  while (cuts.back() < b) cuts.push_back(std::min(b, cuts.back() * ratio));
  const QuadratureOptions panel_opts{opts.rel_tol, opts.abs_tol, opts.max_depth};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += adaptive_integral(f, cuts[i - 1], cuts[i], panel_opts);
  }
  return total;
}

double safeguarded_newton(const ScalarFn& g, const ScalarFn& dg, double lo, double hi,
                          const RootOptions& opts) {
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (g_lo > 0.0 || g_hi < 0.0) {
    std::ostringstream os;
    os << "root not bracketed on [" << lo << ", " << hi << "]: g = " << g_lo << ", " << g_hi;
    throw DomainError(os.str());
  }
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < opts.max_iter; ++it) {
    const double gx = g(x);
    if (std::abs(gx) <= opts.f_tol || gx == 0.0) return x;
    if (gx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double width = hi - lo;
    const double x_tol =
        std::max(opts.x_tol, 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x));
    if (width <= x_tol) return x;
    const double slope = dg(x);
    double next = (slope > 0.0 && std::isfinite(slope)) ? x - gx / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= x_tol) return next;
    x = next;
  }
  return x;
}

// ---------------------------------------------------------------------------

HermiteSpline::HermiteSpline(std::vector<double> x, std::vector<double> y, std::vector<double> d,
                             bool monotone)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
  if (x_.size() < 2 || y_.size() != x_.size() || d_.size() != x_.size()) {
    throw DomainError("HermiteSpline: need >= 2 nodes with matching values and slopes");
  }
  if (!monotone) return;
  const std::size_t n = x_.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double delta = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    if (delta == 0.0) {
      d_[i] = 0.0;
      d_[i + 1] = 0.0;
      continue;
    }
    if (d_[i] * delta < 0.0) d_[i] = 0.0;
    if (d_[i + 1] * delta < 0.0) d_[i + 1] = 0.0;
    const double a = d_[i] / delta;
    const double b = d_[i + 1] / delta;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      d_[i] = tau * a * delta;
      d_[i + 1] = tau * b * delta;
    }
  }
}

HermiteSpline HermiteSpline::pchip(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("pchip: need at least two nodes");
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) continue;
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (s * d0 <= 0.0) return 0.0;
      if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
      return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  return HermiteSpline(std::move(x), std::move(y), std::move(d), true);
}

std::size_t HermiteSpline::segment(double t) const {
  if (t <= x_.front()) return 0;
  if (t >= x_.back()) return x_.size() - 2;
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double HermiteSpline::operator()(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double HermiteSpline::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s;
  const double dh00 = (6 * s2 - 6 * s) / h;
  const double dh10 = 3 * s2 - 4 * s + 1;
  const double dh01 = (-6 * s2 + 6 * s) / h;
  const double dh11 = 3 * s2 - 2 * s;
  return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

double lagrange4_uniform(std::span<const double> values, double s) {
  const auto n = static_cast<long>(values.size());
  if (n < 4) throw DomainError("lagrange4_uniform: need at least four values");
  long base = static_cast<long>(std::floor(s)) - 1;
  base = std::clamp(base, 0L, n - 4);
  double result = 0.0;
  for (long k = 0; k < 4; ++k) {
    double w = 1.0;
    for (long m = 0; m < 4; ++m) {
      if (m == k) continue;
      w *= (s - static_cast<double>(base + m)) / static_cast<double>(k - m);
    }
    result += w * values[static_cast<std::size_t>(base + k)];
  }
  return result;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("fit_line: need >= 2 paired samples");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    A(static_cast<Eigen::Index>(i), 0) = x[i];
    A(static_cast<Eigen::Index>(i), 1) = 1.0;
    b[static_cast<Eigen::Index>(i)] = y[i];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  LineFit fit;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.rms = std::sqrt((A * coef - b).squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace splap::numerics
