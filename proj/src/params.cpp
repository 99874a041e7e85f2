#include "splap/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "splap/errors.hpp"

namespace splap {

Perturbation Perturbation::constant(double c) {
  Perturbation g;
  g.kind_ = Kind::Constant;
  g.a_ = c;
  return g;
}

Perturbation Perturbation::linear(double a, double b) {
  Perturbation g;
  g.kind_ = Kind::Linear;
  g.a_ = a;
  g.b_ = b;
  g.lipschitz_ = std::abs(b);
  return g;
}

Perturbation Perturbation::tabulated(std::vector<double> t, std::vector<double> g) {
  if (t.size() < 2 || t.size() != g.size()) {
    throw ConfigError("tabulated perturbation needs >= 2 matching samples");
  }
  if (t.front() != 0.0) throw ConfigError("tabulated perturbation must start at t = 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw ConfigError("tabulated perturbation abscissae must increase");
  }
  Perturbation out;
  out.kind_ = Kind::Tabulated;
  out.cumulative_.assign(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double h = t[i] - t[i - 1];
    out.lipschitz_ = std::max(out.lipschitz_, std::abs(g[i] - g[i - 1]) / h);
    out.cumulative_[i] = out.cumulative_[i - 1] + 0.5 * h * (g[i] + g[i - 1]);
  }
  out.t_ = std::move(t);
  out.g_ = std::move(g);
  return out;
}

Perturbation Perturbation::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto number = [&](std::size_t i) {
    char* end = nullptr;
    const double v = std::strtod(parts[i].c_str(), &end);
    if (end == parts[i].c_str() || *end != '\0') {
      throw ConfigError("bad number '" + parts[i] + "' in perturbation '" + spec + "'");
    }
    return v;
  };
  if (parts.empty() || parts[0] == "none" || parts[0] == "0") return none();
  if (parts[0] == "const" && parts.size() == 2) return constant(number(1));
  if (parts[0] == "linear" && parts.size() == 3) return linear(number(1), number(2));
  throw ConfigError("unknown perturbation '" + spec + "' (expected none, const:c, linear:a:b)");
}

bool Perturbation::is_zero() const noexcept {
  switch (kind_) {
    case Kind::None:
      return true;
    case Kind::Constant:
      return a_ == 0.0;
    case Kind::Linear:
      return a_ == 0.0 && b_ == 0.0;
    case Kind::Tabulated:
      return std::all_of(g_.begin(), g_.end(), [](double v) { return v == 0.0; });
  }
  return true;
}

double Perturbation::value(double t) const {
  switch (kind_) {
    case Kind::None:
      return 0.0;
    case Kind::Constant:
      return a_;
    case Kind::Linear:
      return a_ + b_ * t;
    case Kind::Tabulated: {
      if (t <= 0.0) return g_.front();
      if (t >= t_.back()) return g_.back();
      const auto it = std::upper_bound(t_.begin(), t_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
      const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
      return (1.0 - w) * g_[i] + w * g_[i + 1];
    }
  }
  return 0.0;
}

double Perturbation::derivative(double t) const {
  switch (kind_) {
    case Kind::None:
    case Kind::Constant:
      return 0.0;
    case Kind::Linear:
      return b_;
    case Kind::Tabulated: {
      if (t < 0.0 || t >= t_.back()) return 0.0;
      const auto it = std::upper_bound(t_.begin(), t_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
      return (g_[i + 1] - g_[i]) / (t_[i + 1] - t_[i]);
    }
  }
  return 0.0;
}

double Perturbation::primitive(double t) const {
  switch (kind_) {
    case Kind::None:
      return 0.0;
    case Kind::Constant:
      return a_ * t;
    case Kind::Linear:
      return a_ * t + 0.5 * b_ * t * t;
    case Kind::Tabulated: {
      if (t <= 0.0) return g_.front() * t;
      if (t >= t_.back()) return cumulative_.back() + g_.back() * (t - t_.back());
      const auto it = std::upper_bound(t_.begin(), t_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
      const double h = t - t_[i];
      return cumulative_[i] + 0.5 * h * (g_[i] + value(t));
    }
  }
  return 0.0;
}

std::string Perturbation::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::None:
      os << "none";
      break;
    case Kind::Constant:
      os << "const:" << a_;
      break;
    case Kind::Linear:
      os << "linear:" << a_ << ":" << b_;
      break;
    case Kind::Tabulated:
      os << "tabulated(" << t_.size() << " samples, L=" << lipschitz_ << ")";
      break;
  }
  return os.str();
}

void Params::validate() const {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (N < 1) throw DomainError("N must be at least 1");
}

double Params::f(double t) const { return std::pow(t, -gamma) + g.value(t); }

double Params::f_prime(double t) const {
  return -gamma * std::pow(t, -gamma - 1.0) + g.derivative(t);
}

FunctionSpec singular_nonlinearity(const Params& params) {
  return {"t^-gamma + g", [params](double t) { return params.f(t); }};
}

}  // namespace splap
