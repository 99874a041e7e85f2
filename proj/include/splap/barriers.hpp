#pragma once

// Explicit sub- and supersolutions of -Delta_p w = (rhs) and their numerical
// validation. Every barrier here is one-dimensional (a profile of x_N) or
// radial about a centre, so it is described by a scalar profile plus the
// geometry that maps points to the profile coordinate.

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "splap/eigen_radial.hpp"
#include "splap/params.hpp"

namespace splap {

enum class BarrierKind { WMu, EigenPower, LinearLower, Fundamental, Logarithmic, V0Shift };
enum class Sense { Sub, Super };

std::string to_string(BarrierKind kind);
std::string to_string(Sense sense);

struct Region {
  enum class Shape { Strip, Ball, Annulus };
  Shape shape = Shape::Strip;
  /// Strip: 0 and the height. Ball: 0 and the radius. Annulus: inner, outer radius.
  double inner = 0.0;
  double outer = 1.0;
};

/// Scalar profile of a barrier with its claimed right-hand side.
struct Profile {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  /// Claimed value of -Delta_p w at profile coordinate s.
  std::function<double(double)> rhs;
};

class Barrier {
 public:
  Barrier(BarrierKind kind, Sense sense, Params params, std::map<std::string, double> coeffs,
          Region region, int dim, Eigen::VectorXd center, Profile profile, FunctionSpec f);

  BarrierKind kind() const noexcept { return kind_; }
  Sense sense() const noexcept { return sense_; }
  const Params& params() const noexcept { return params_; }
  const Region& region() const noexcept { return region_; }
  int dimension() const noexcept { return dim_; }
  const Eigen::VectorXd& center() const noexcept { return center_; }
  const std::map<std::string, double>& coeffs() const noexcept { return coeffs_; }
  /// Named coefficient; ConfigError if absent.
  double coeff(const std::string& name) const;

  /// True for profiles of |x - center|, false for profiles of x_N.
  bool radial() const noexcept { return region_.shape != Region::Shape::Strip; }
  /// Profile coordinate of a point (x_N, or |x - center|).
  double coordinate(const Eigen::VectorXd& x) const;

  double profile(double s) const { return profile_.value(s); }
  double profile_slope(double s) const { return profile_.slope(s); }
  double claimed_rhs(double s) const { return profile_.rhs(s); }

  /// Nonlinearity the barrier is compared against (may be empty).
  const FunctionSpec& nonlinearity() const noexcept { return f_; }

  double operator()(const Eigen::VectorXd& x) const { return profile(coordinate(x)); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

 private:
  BarrierKind kind_;
  Sense sense_;
  Params params_;
  std::map<std::string, double> coeffs_;
  Region region_;
  int dim_;
  Eigen::VectorXd center_;
  Profile profile_;
  FunctionSpec f_;
};

inline constexpr double kDefaultHarnack = 10.0;

/// Supersolution w_mu defined by int_0^{w} ds / (mu - H(s))^{1/p} = (p/(p-1))^{1/p} t,
/// where H' = h, h = A on (0, 0.9 rho], a C^1 cubic blend on [0.9 rho, rho] and
/// c/t^2 beyond rho. A = 1 + max of max(f, 0) over samples of (0, rho).
/// Throws DomainError if mu < c/rho and DominationError if h does not exceed
/// max(f, 0) on a verification grid.
Barrier build_wmu(double p, double rho, double c, double mu, const FunctionSpec& f);

/// h and H of a w_mu barrier.
double wmu_h(const Barrier& b, double s);
double wmu_H(const Barrier& b, double s);

/// w = s phi^{p/(gamma+p-1)} on the unit ball with s chosen so sup alpha = c0.
/// Coefficients: s, R0, beta, sup_alpha. ConfigError on mismatched pair.
Barrier build_eigen_power(const Params& params, double c0, double t0, const EigenPair& pair);

/// alpha(r) of an eigen-power barrier.
double eigen_power_alpha(const Barrier& b, double r);

/// phi_R with R = (2 lambda1/c0)^{1/p} and phi_R(0) = t0; Coefficients R, C, t0, c0.
/// DominationError if f(t) <= c0 t^{p-1} somewhere on a sample grid of (0, t0).
Barrier build_linear_lower(const Params& params, double c0, double t0, const EigenPair& pair);

/// The lower bound x_N -> phi_R(R - x_N) (x_N < R), t0 otherwise.
double linear_lower_bound(const Barrier& b, double xN);

/// p-harmonic barrier on the annulus R < |x - x0| < 4R: fundamental solution
/// for p < N, logarithmic for p = N. Coefficients c, k, R, u0, CH.
Barrier build_annulus_barrier(int N, double p, double R, double u0, double CH = kDefaultHarnack);

/// s v0(x_N + epsilon) with -Delta_p v = s^{gamma+p-1} / v^gamma.
Barrier build_v0_shift(const Params& params, double s, double epsilon);

struct BarrierReport {
  std::vector<double> coordinate;
  /// -Delta_p w minus the claimed right-hand side, at each node.
  std::vector<double> residual;
  /// Signed violation of the claimed inequality, normalised by 1 + |rhs|;
  /// positive means violated.
  std::vector<double> violation;
  double worst_violation = 0.0;
  double worst_at = 0.0;
  /// max |residual| / (1 + |rhs|)
  double max_abs_residual = 0.0;
  /// Smallest margin by which the claimed right-hand side sits on the correct
  /// side of f(w) (Super: rhs - f, Sub: f - rhs), relative. NaN if not applicable.
  double domination_margin = 0.0;
};

/// Sample points (of dimension b.dimension()) inside the barrier region.
std::vector<Eigen::VectorXd> default_grid(const Barrier& b);

/// Finite-difference evaluation of -Delta_p on the grid: radial flux form for
/// 1D/radial kinds, full N-dimensional stencil for annulus barriers.
BarrierReport validate_barrier(const Barrier& b, const std::vector<Eigen::VectorXd>& grid);
BarrierReport validate_barrier(const Barrier& b);

}  // namespace splap
