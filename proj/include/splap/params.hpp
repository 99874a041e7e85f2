#pragma once

#include <functional>
#include <string>
#include <vector>

namespace splap {

/// Regular perturbation g on [0, inf). Locally Lipschitz by construction.
class Perturbation {
 public:
  enum class Kind { None, Constant, Linear, Tabulated };

  Perturbation() = default;

  static Perturbation none() { return {}; }
  static Perturbation constant(double c);
  /// g(t) = a + b t
  static Perturbation linear(double a, double b);
  /// Piecewise linear through (t_i, g_i), constant beyond the last sample.
  /// Abscissae must start at 0 and be strictly increasing.
  static Perturbation tabulated(std::vector<double> t, std::vector<double> g);
  /// Parses "none", "const:c", "linear:a:b".
  static Perturbation parse(const std::string& spec);

  Kind kind() const noexcept { return kind_; }
  bool is_zero() const noexcept;
  double value(double t) const;
  double derivative(double t) const;
  /// Antiderivative from 0.
  double primitive(double t) const;
  double lipschitz() const noexcept { return lipschitz_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::None;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> t_;
  std::vector<double> g_;
  std::vector<double> cumulative_;
  double lipschitz_ = 0.0;
};

/// Exponent triple (p, gamma, N) plus optional perturbation g.
struct Params {
  double p = 2.0;
  double gamma = 3.0;
  int N = 1;
  Perturbation g;

  /// Throws DomainError if p <= 1, gamma <= 0 or N < 1.
  void validate() const;

  /// Boundary growth exponent p / (gamma + p - 1).
  double beta_u() const noexcept { return p / (gamma + p - 1.0); }
  /// Gradient blow-up exponent (1 - gamma) / (gamma + p - 1).
  double beta_grad() const noexcept { return (1.0 - gamma) / (gamma + p - 1.0); }

  /// f(t) = t^{-gamma} + g(t).
  double f(double t) const;
  double f_prime(double t) const;
};

/// A named scalar function of one variable, e.g. a nonlinearity sampled by barrier checks.
struct FunctionSpec {
  std::string name;
  std::function<double(double)> fn;

  double operator()(double t) const { return fn(t); }
};

FunctionSpec singular_nonlinearity(const Params& params);

}  // namespace splap
