#pragma once

// Half-line solutions of -(|v'|^{p-2} v')' = v^{-gamma}, v(0) = 0.
//
// For gamma > 1 every solution is either the power profile v0 or a member of
// the one-parameter family v_M defined implicitly through
//
//   F_M(v) := int_0^v (M + s^{1-gamma}/(gamma-1))^{-1/p} ds = (p/(p-1))^{1/p} t,
//
// with energy ((p-1)/p) (v')^p - v^{1-gamma}/(gamma-1) = M conserved along it.
// For 0 < gamma <= 1 no solution exists.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "splap/params.hpp"

namespace splap {

/// Leading coefficient of v0(t) = a t^{p/(gamma+p-1)}.
template <class Scalar>
Scalar v0_coefficient(Scalar p, Scalar gamma) {
  using std::pow;
  const Scalar e = gamma + p - Scalar(1);
  return pow(pow(e, p) / (pow(p, p - Scalar(1)) * (p - Scalar(1)) * (gamma - Scalar(1))),
             Scalar(1) / e);
}

template <class Scalar>
Scalar v0_profile(Scalar p, Scalar gamma, Scalar t) {
  using std::pow;
  return v0_coefficient(p, gamma) * pow(t, p / (gamma + p - Scalar(1)));
}

/// Closed-form power solution. Throws NonexistenceError for gamma <= 1 and
/// DomainError for t < 0.
double eval_v0(const Params& params, double t);
double eval_v0_prime(const Params& params, double t);

/// A derivative that may be +infinity (v' blows up at t = 0 when gamma > 1).
struct Slope {
  double value = 0.0;
  bool infinite = false;
};

struct VPoint {
  double v = 0.0;
  Slope v_prime;
};

/// Tabulated quadrature solution v_M on [0, t_max]. Immutable after construction.
class QuadratureSolution {
 public:
  const Params& params() const noexcept { return params_; }
  double M() const noexcept { return M_; }
  double t_max() const noexcept { return t_.back(); }
  std::span<const double> t() const noexcept { return t_; }
  std::span<const double> v() const noexcept { return v_; }
  std::size_t size() const noexcept { return t_.size(); }

 private:
  QuadratureSolution(Params params, double M, std::vector<double> t, std::vector<double> v)
      : params_(std::move(params)), M_(M), t_(std::move(t)), v_(std::move(v)) {}

  friend QuadratureSolution build_vM(const Params&, double, double, std::size_t);
  friend QuadratureSolution scaling_map(const QuadratureSolution&, double);

  Params params_;
  double M_;
  std::vector<double> t_;
  std::vector<double> v_;
};

inline constexpr double kDefaultTMax = 100.0;
inline constexpr std::size_t kDefaultTablePoints = 2048;

/// Integrand (M + s^{1-gamma}/(gamma-1))^{-1/p} of the implicit relation.
double quadrature_integrand(const Params& params, double M, double s);

/// F_M(b) - F_M(a) by graded Gauss-Legendre panels.
double quadrature_F(const Params& params, double M, double a, double b);

/// (p/(p-1))^{1/p}, the factor multiplying t in the implicit relation.
double quadrature_time_factor(double p);

/// Tabulates v_M on a quadratically graded t grid. Throws NonexistenceError
/// (gamma <= 1), DomainError (M < 0, t_max <= 0) or QuadratureError.
QuadratureSolution build_vM(const Params& params, double M, double t_max = kDefaultTMax,
                            std::size_t points = kDefaultTablePoints);

/// Solves the implicit relation at t by safeguarded Newton seeded from the
/// table; v' follows from the energy identity. RangeError outside [0, t_max].
VPoint eval_vM(const QuadratureSolution& sol, double t);

/// v' from the energy identity at height v (infinite at v = 0).
Slope energy_slope(const Params& params, double M, double v);

/// ((p-1)/p) (v')^p - v^{1-gamma}/(gamma-1)
double energy(const Params& params, double v, double v_prime);

/// Limit slope (M p/(p-1))^{1/p} as t -> infinity.
double asymptotic_slope(const Params& params, double M);

/// Maps v_1 to v_M(t) = lambda^{-p/(gamma+p-1)} v_1(lambda t) with
/// M = lambda^{(gamma-1)p/(gamma+p-1)}.
QuadratureSolution scaling_map(const QuadratureSolution& sol1, double lambda);

/// M reached by scaling_map for a given lambda.
double scaled_energy(const Params& params, double lambda);

struct ExistenceReport {
  bool exists = false;
  /// Human-readable reason ("nonexistent (gamma<=1)" when it fails).
  std::string verdict;
  /// Which term of the conserved energy diverges as v -> infinity.
  std::string divergent_term;
  /// That term evaluated at v = witness_v, showing the divergence.
  double witness_v = 0.0;
  double witness_value = 0.0;
};

ExistenceReport nonexistence_diagnostic(const Params& params);

}  // namespace splap
