#pragma once

#include <stdexcept>
#include <string>

namespace splap {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested solution does not exist (e.g. gamma <= 1 in the 1D problem).
class NonexistenceError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not reach its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Shooting bisection for the first eigenvalue failed to bracket.
class EigenError : public Error {
 public:
  using Error::Error;
};

/// A barrier right-hand side failed to dominate the nonlinearity on samples.
class DominationError : public Error {
 public:
  using Error::Error;
};

/// Newton/continuation did not converge; the message carries the trace.
class SolveError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  using Error::Error;
};

}  // namespace splap
