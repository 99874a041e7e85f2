#include "splap/eigen_radial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "splap/errors.hpp"
#include "splap/numerics.hpp"

namespace splap {

namespace {

using State = Eigen::Vector2d;  // (phi, q)

constexpr double kSeriesStart = 1e-4;

struct Shooter {
  int N;
  double p;
  double lambda;

  State operator()(double r, const State& y) const {
    const double rn = std::pow(r, N - 1);
    const double q = y[1];
    const double dphi = std::copysign(std::pow(std::abs(q) / rn, 1.0 / (p - 1.0)), q);
    const double phi = y[0];
    const double dq = -lambda * rn * std::copysign(std::pow(std::abs(phi), p - 1.0), phi);
    return {dphi, dq};
  }

  // Leading terms of the regular solution with phi(0) = 1.
  State series(double r) const {
    const double e = p / (p - 1.0);
    const double phi = 1.0 - (p - 1.0) / p * std::pow(lambda / N, 1.0 / (p - 1.0)) * std::pow(r, e);
    const double q = -lambda * std::pow(r, N) / N;
    return {phi, q};
  }
};

numerics::OdeOptions shoot_options() {
  numerics::OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  opts.h_initial = 1e-4;
  return opts;
}

// True when phi reaches zero on (0, 1].
bool zero_before_one(int N, double p, double lambda) {
  const Shooter sh{N, p, lambda};
  const auto res = numerics::dopri5<2>(sh, kSeriesStart, 1.0, sh.series(kSeriesStart),
                                       shoot_options(),
                                       [](double, const State& y) { return y[0] <= 0.0; });
  return res.stopped || res.y[0] <= 0.0;
}

// Cubic Hermite on one segment, slopes limited so the piece stays monotone.
double hermite_piece(double x0, double x1, double y0, double y1, double d0, double d1, double x,
                     bool monotone) {
  const double h = x1 - x0;
  if (monotone) {
    const double delta = (y1 - y0) / h;
    if (delta == 0.0) {
      d0 = d1 = 0.0;
    } else {
      if (d0 * delta < 0.0) d0 = 0.0;
      if (d1 * delta < 0.0) d1 = 0.0;
      const double a = d0 / delta, b = d1 / delta;
      const double r2 = a * a + b * b;
      if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        d0 = tau * a * delta;
        d1 = tau * b * delta;
      }
    }
  }
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * d1;
}

std::size_t segment_of(const EigenPair& pair, double r) {
  const std::size_t n = pair.r.size();
  const double step = 1.0 / static_cast<double>(n - 1);
  auto i = static_cast<std::size_t>(r / step);
  return std::min(i, n - 2);
}

void check_radius(const EigenPair& pair, double r) {
  if (pair.r.size() < 2) throw DomainError("eigenpair has no samples");
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "radius " << r << " outside [0, 1]";
    throw RangeError(os.str());
  }
}

}  // namespace

EigenPair solve_eigen(int N, double p, double tol) {
  if (N < 1) throw DomainError("solve_eigen: N must be at least 1");
  if (!(p > 1.0)) throw DomainError("solve_eigen: p must exceed 1");
  if (!(tol > 0.0)) throw DomainError("solve_eigen: tol must be positive");

  std::ostringstream trace;
  double lo = 1e-6;
  if (zero_before_one(N, p, lo)) {
    throw EigenError("solve_eigen: phi vanishes before r = 1 already at lambda = 1e-6");
  }
  double hi = 1.0;
  trace << "lo=" << lo;
  int grow = 0;
  while (!zero_before_one(N, p, hi)) {
    lo = hi;
    hi *= 2.0;
    trace << " hi=" << hi;
    if (++grow > 60) throw EigenError("solve_eigen: no sign change of phi(1); bracket " + trace.str());
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (zero_before_one(N, p, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  EigenPair pair;
  pair.N = N;
  pair.p = p;
  pair.lambda1 = 0.5 * (lo + hi);
  const std::size_t n = kEigenSamples;
  pair.r.resize(n);
  pair.phi.resize(n);
  pair.dphi.resize(n);
  pair.flux.resize(n);
  for (std::size_t k = 0; k < n; ++k) pair.r[k] = static_cast<double>(k) / static_cast<double>(n - 1);
  pair.phi[0] = 1.0;
  pair.dphi[0] = 0.0;
  pair.flux[0] = 0.0;

  const Shooter sh{N, p, pair.lambda1};
  State y = sh.series(kSeriesStart);
  double r = kSeriesStart;
  for (std::size_t k = 1; k < n; ++k) {
    y = numerics::dopri5<2>(sh, r, pair.r[k], y, shoot_options()).y;
    r = pair.r[k];
    pair.phi[k] = y[0];
    pair.flux[k] = y[1];
    pair.dphi[k] = sh(r, y)[0];
  }
  return pair;
}

EigenPair normalized(const EigenPair& pair, double value) {
  if (!(value > 0.0)) throw DomainError("normalization must be positive");
  EigenPair out = pair;
  const double scale = value / pair.normalization;
  const double qscale = std::pow(scale, pair.p - 1.0);
  for (auto& v : out.phi) v *= scale;
  for (auto& v : out.dphi) v *= scale;
  for (auto& v : out.flux) v *= qscale;
  out.normalization = value;
  return out;
}

double eval_phi(const EigenPair& pair, double r) {
  check_radius(pair, r);
  const std::size_t i = segment_of(pair, r);
  const double v = hermite_piece(pair.r[i], pair.r[i + 1], pair.phi[i], pair.phi[i + 1],
                                 pair.dphi[i], pair.dphi[i + 1], r, true);
  return std::max(v, 0.0);
}

double eval_dphi(const EigenPair& pair, double r) {
  check_radius(pair, r);
  const double N = pair.N;
  const double p = pair.p;
  if (pair.N > 1 && r < pair.r[1]) {
    // q / r^{N-1} loses accuracy next to the axis; use the leading series term.
    const double c = pair.lambda1 * std::pow(pair.normalization, p - 1.0) / N;
    return -std::pow(c * r, 1.0 / (p - 1.0));
  }
  const std::size_t i = segment_of(pair, r);
  const auto dq = [&](std::size_t k) {
    return -pair.lambda1 * std::pow(pair.r[k], N - 1) * std::pow(std::max(pair.phi[k], 0.0), p - 1.0);
  };
  const double q = hermite_piece(pair.r[i], pair.r[i + 1], pair.flux[i], pair.flux[i + 1], dq(i),
                                 dq(i + 1), r, false);
  const double rn = std::pow(r, N - 1);
  return -std::pow(std::abs(q) / rn, 1.0 / (p - 1.0));
}

double eval_phi_scaled(const EigenPair& pair, double R, double r) {
  if (!(R > 0.0)) throw DomainError("ball radius must be positive");
  return eval_phi(pair, r / R);
}

double eval_dphi_scaled(const EigenPair& pair, double R, double r) {
  if (!(R > 0.0)) throw DomainError("ball radius must be positive");
  return eval_dphi(pair, r / R) / R;
}

double radial_residual(const EigenPair& pair, double r, double h) {
  const double N = pair.N;
  const double p = pair.p;
  const auto flux = [&](double s) {
    const double d = eval_dphi(pair, s);
    return std::pow(s, N - 1) * std::pow(std::abs(d), p - 2.0) * d;
  };
  const double div = (flux(r + 0.5 * h) - flux(r - 0.5 * h)) / h;
  const double rhs = pair.lambda1 * std::pow(r, N - 1) * std::pow(eval_phi(pair, r), p - 1.0);
  return std::abs(div + rhs) / (std::abs(rhs) + 1e-300);
}

}  // namespace splap
