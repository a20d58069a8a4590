#pragma once

#include <stdexcept>
#include <string>

namespace fraclangevin {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A Mittag-Leffler evaluation could not reach its accuracy floor.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Coefficient vector length does not match the spectrum truncation.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// gamma = 1: the non-local problem has no unique solution.
class DegenerateGamma : public Error {
 public:
  using Error::Error;
};

/// Inverse problem has no solution: the solvability condition fails at some
/// index of the degenerate set.
class Unsolvable : public Error {
 public:
  Unsolvable(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class InsufficientSpectrum : public Error {
 public:
  using Error::Error;
};

}  // namespace fraclangevin
