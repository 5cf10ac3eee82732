#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specnorm {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch or an operation's size precondition violated.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A NaN or Inf reached a matrix.
class NonFiniteError : public Error {
public:
  using Error::Error;
};

/// An iterative kernel ran out of iterations. `iterations` is the count
/// spent and `residual` the last measured convergence residual.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &what, std::size_t iterations,
                   double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

private:
  std::size_t iterations_;
  double residual_;
};

/// Gram-Schmidt met a vector (numerically) in the span of its predecessors.
class DependenceError : public Error {
public:
  DependenceError(const std::string &what, std::size_t index)
      : Error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

/// Requested shift is not close to any computed eigenvalue.
class SpectrumError : public Error {
public:
  using Error::Error;
};

/// The certifier could not reach a verdict it is willing to stand behind.
class IndeterminateError : public Error {
public:
  using Error::Error;
};

/// Malformed matrix file.
class ParseError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace specnorm
