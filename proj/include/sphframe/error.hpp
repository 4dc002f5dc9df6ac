#pragma once

#include <stdexcept>
#include <string>

namespace sphframe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or flag value.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Sequence length, bandlimit or level does not match the layout it is used with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A requested computation would exceed the configured memory bound.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Conjugate gradient did not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace sphframe
