#pragma once

// First Dirichlet eigenpair of the p-Laplacian on the unit ball, radial case:
//   -(r^{N-1} |phi'|^{p-2} phi')' = lambda1 r^{N-1} phi^{p-1},  phi'(0) = 0, phi(1) = 0.

#include <vector>

namespace splap {

struct EigenPair {
  int N = 1;
  double p = 2.0;
  double lambda1 = 0.0;
  /// phi(0); samples below are scaled to it.
  double normalization = 1.0;
  /// Uniform radial grid on [0, 1] with phi, phi' and the flux
  /// q = r^{N-1} |phi'|^{p-2} phi'.
  std::vector<double> r;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> flux;
};

inline constexpr std::size_t kEigenSamples = 1025;

/// Shooting with bisection on lambda. Throws DomainError for bad input and
/// EigenError when the bracket cannot be established.
EigenPair solve_eigen(int N, double p, double tol = 1e-11);

/// Same pair scaled so that phi(0) = value.
EigenPair normalized(const EigenPair& pair, double value);

/// Monotone cubic interpolation of phi; RangeError outside [0, 1].
double eval_phi(const EigenPair& pair, double r);
double eval_dphi(const EigenPair& pair, double r);

/// phi_R(r) = phi(r / R), eigenfunction on B_R with eigenvalue R^{-p} lambda1.
double eval_phi_scaled(const EigenPair& pair, double R, double r);
double eval_dphi_scaled(const EigenPair& pair, double R, double r);

/// Residual of the radial equation at interior r by centred differences of the
/// flux, relative to the size of the right-hand side. Used as a self-check.
double radial_residual(const EigenPair& pair, double r, double h = 1e-4);

}  // namespace splap
