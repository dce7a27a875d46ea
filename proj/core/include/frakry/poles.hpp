#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "frakry/linalg.hpp"

namespace frakry {

/// Scalar function whose matrix action is computed: z^(-alpha/2) or
/// (1 + nu z^(alpha/2))^(-1).
struct TargetFunction {
  enum class Kind { InverseFracPower, FracResolvent };

  Kind kind = Kind::InverseFracPower;
  double alpha = 1.5;
  double nu = 0.0;  // FracResolvent only

  static TargetFunction inverse_frac_power(double alpha);
  static TargetFunction frac_resolvent(double alpha, double nu);

  /// Throws DomainError unless 0 < alpha <= 2 and (resolvent) nu > 0.
  void validate() const;
  double operator()(double z) const;
  bool is_fractional() const noexcept { return alpha != 2.0; }
};

std::string_view to_string(TargetFunction::Kind kind);

namespace poles {

/// Lambert-W based choice of the scale tau mapping quadrature nodes to poles.
struct TauSelection {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::size_t k = 0;
  double k_bar = 0.0;
  double sigma_tilde = 0.0;
  double tau_tilde = 0.0;
  double tau = 0.0;
  bool overridden = false;  // tau supplied by the caller
};

TauSelection select_tau(double alpha, std::size_t k, double lambda_min, double lambda_max);

/// R(z) = chi prod_r (z + eps_r) / prod_j (z + eta_j) ~ z^(-alpha/2).
struct FracPowerRational {
  double alpha = 0.0;
  std::size_t k = 0;
  double tau = 0.0;
  Vector eps;    // k-1 numerator roots, negated, descending
  Vector eta;    // k denominator roots, negated, descending
  double chi = 0.0;
  Vector omega;  // Gauss-Jacobi weights (ascending node order)
  Vector theta;  // Gauss-Jacobi nodes, ascending
  Vector zeta;   // zeros of P_{k-1}^(alpha/2, 1-alpha/2), ascending

  /// eta_1 > eps_1 > eta_2 > ... > eps_{k-1} > eta_k > 0 and chi > 0.
  bool interlaces() const;
};

FracPowerRational build_frac_power_rational(double alpha, std::size_t k, double tau);

/// Product form, evaluated in log-magnitude. Requires z >= 0.
double evaluate_rational(const FracPowerRational& r, double z);
/// Partial-fraction (quadrature) form of the same function.
double evaluate_rational_partial_fractions(const FracPowerRational& r, double z);

/// Value represented as sign * exp(log_abs).
struct SignedLog {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();
};

/// p_{k-1}(-x) + nu q_k(-x) in sign/log-magnitude form, never expanded
/// into monomial coefficients.
SignedLog resolvent_denominator_at(const FracPowerRational& r, double nu, double x);

/// The k roots of p_{k-1}(z) + nu q_k(z), negated (positive) and ascending.
/// Throws InternalConsistency if the interlacing brackets do not show
/// exactly k sign changes.
Vector resolvent_denominator_roots(const FracPowerRational& r, double nu);

struct PoleSet {
  TargetFunction target;
  Vector xi;  // positive, strictly ascending
  FracPowerRational rational;
  TauSelection tau;

  std::size_t size() const noexcept { return xi.size(); }
};

/// Poles for the rational Krylov method. Throws NotFractional for alpha == 2.
/// `tau_override`, when set, replaces the Lambert-W choice of tau.
PoleSet make_pole_set(const TargetFunction& target, std::size_t k, double lambda_min,
                      double lambda_max, std::optional<double> tau_override = std::nullopt);

}  // namespace poles
}  // namespace frakry
