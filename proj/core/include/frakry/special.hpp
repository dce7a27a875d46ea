#pragma once

#include <cstddef>

#include "frakry/linalg.hpp"

namespace frakry::special {

/// Principal branch of the Lambert-W function on x >= 0, by Halley
/// iteration from ln(1 + x). Throws DomainError for x < 0.
double lambert_w(double x);

/// ln Gamma(x) for x > 0 (Lanczos approximation, g = 7).
double log_gamma(double x);

/// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// ln |C(x, m)|, the generalized binomial coefficient
/// Gamma(x + 1) / (Gamma(m + 1) Gamma(x - m + 1)); requires x + 1 > 0 and
/// x - m + 1 > 0.
double log_binomial(double x, double m);

/// Exponents of the Jacobi weight (1 - x)^a (1 + x)^b.
struct JacobiParams {
  double a;
  double b;
};

void validate(const JacobiParams& p);

/// Total mass of the Jacobi weight on [-1, 1]: 2^(a+b+1) B(a+1, b+1).
double jacobi_weight_mass(const JacobiParams& p);

struct QuadratureRule {
  Vector nodes;    // ascending, strictly inside (-1, 1)
  Vector weights;  // positive
};

/// k-point Gauss-Jacobi rule by Golub-Welsch.
QuadratureRule gauss_jacobi(std::size_t k, const JacobiParams& p);

/// Zeros of the degree-m Jacobi polynomial P_m^(a,b), ascending.
Vector jacobi_zeros(std::size_t m, const JacobiParams& p);

}  // namespace frakry::special
