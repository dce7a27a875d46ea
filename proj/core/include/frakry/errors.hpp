#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frakry {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition (e.g. passed a non-symmetric matrix).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel exhausted its iteration budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A result failed a self-check that holds in exact arithmetic.
class InternalConsistency : public Error {
 public:
  using Error::Error;
};

/// Cholesky met a non-positive pivot.
class NotSpd : public Error {
 public:
  NotSpd(std::size_t pivot, double value)
      : Error("matrix is not positive definite: pivot " + std::to_string(pivot) +
              " = " + std::to_string(value)),
        pivot_(pivot),
        value_(value) {}

  std::size_t pivot() const noexcept { return pivot_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t pivot_;
  double value_;
};

/// Rational pole construction requested for alpha == 2, where the target
/// needs no rational approximation.
class NotFractional : public Error {
 public:
  using Error::Error;
};

/// Projected (Rayleigh) eigenvalue escaped the operator's spectral interval.
class SpectralLeak : public Error {
 public:
  SpectralLeak(double eigenvalue, double lo, double hi)
      : Error("projected eigenvalue " + std::to_string(eigenvalue) +
              " outside spectral interval [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]"),
        eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace frakry
