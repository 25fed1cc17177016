#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holderlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: length mismatch, violated precondition, bad config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A quantity left the representable floating point range.
class NumericalRangeError : public Error {
 public:
  NumericalRangeError(const std::string& what, std::size_t index)
      : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Evaluation outside the domain where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Hybrid tolerance used throughout: tol * max(1, |reference|).
inline double scaled_tolerance(double tol, double reference) noexcept {
  const double mag = reference < 0 ? -reference : reference;
  return tol * (mag > 1.0 ? mag : 1.0);
}

}  // namespace holderlab
