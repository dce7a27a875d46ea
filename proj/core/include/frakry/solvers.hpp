#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "frakry/discretize.hpp"
#include "frakry/krylov.hpp"

namespace frakry::solvers {

struct TimeGrid {
  double t0 = 0.0;
  double t_end = 1.0;
  std::size_t nt = 1;

  void validate() const;
  double delta_t() const noexcept { return (t_end - t0) / static_cast<double>(nt); }
};

/// One-step (backward Euler family) time discretization of
/// y' = -mu A^(alpha/2) y + s. The implicit part reduces to
/// f(z) = (1 + nu z^(alpha/2))^{-1} with nu = dt * mu * beta_l / alpha_l.
struct SteppingScheme {
  enum class Kind { BackwardEuler, ImexBackwardEuler };

  Kind kind = Kind::BackwardEuler;
  double mu = 1.0;
  double dt = 0.0;
  // LMM coefficients of the implicit step; (1, 1) for backward Euler.
  double alpha_l = 1.0;
  double beta_l = 1.0;
  double gamma_0 = 1.0;  // explicit weight of the source (IMEX)

  static SteppingScheme backward_euler(double mu, double dt);
  static SteppingScheme imex_backward_euler(double mu, double dt);

  void validate() const;
  double nu() const noexcept { return dt * mu * beta_l / alpha_l; }
};

/// A^{-alpha/2} rhs.
Vector solve_steady(const discretize::FdLaplacian& a, std::span<const double> rhs, KrylovMethod method,
                    std::size_t k);
Vector solve_steady(const discretize::GridProblem& grid, std::span<const double> rhs, KrylovMethod method,
                    std::size_t k);

/// Reusable stepper for a fixed (operator, scheme, method, k). The resolvent
/// poles are built once; the Krylov basis is rebuilt for every step. For
/// alpha == 2 the step is the direct banded solve of (I + nu A).
class Stepper {
 public:
  Stepper(const discretize::FdLaplacian& a, SteppingScheme scheme, KrylovMethod method, std::size_t k,
          KrylovOptions options = {});

  /// (I + nu A^(alpha/2))^{-1} (state + dt * source)
  Vector step_linear(std::span<const double> state, std::span<const double> source) const;
  /// Same with s(u) = -(u^3 - u) evaluated at `state`.
  Vector step_imex_allen_cahn(std::span<const double> state) const;
  /// Applies the step resolvent to an already assembled right-hand side.
  Vector apply_resolvent(std::span<const double> rhs) const;

  const TargetFunction& target() const noexcept { return target_; }
  const SteppingScheme& scheme() const noexcept { return scheme_; }

 private:
  const discretize::FdLaplacian& a_;
  SteppingScheme scheme_;
  TargetFunction target_;
  std::unique_ptr<MatrixFunctionApplier> applier_;  // null for alpha == 2
};

Vector step_linear(const discretize::FdLaplacian& a, const SteppingScheme& scheme, std::span<const double> state,
                   std::span<const double> source, KrylovMethod method, std::size_t k);

/// nt + 1 states; u0 first. Source is zero. scheme.dt must equal the grid step.
std::vector<Vector> run_linear_evolution(const discretize::FdLaplacian& a, const SteppingScheme& scheme,
                                         std::span<const double> u0, const TimeGrid& time, KrylovMethod method,
                                         std::size_t k);

Vector step_imex_allen_cahn(const discretize::FdLaplacian& a, const SteppingScheme& scheme,
                            std::span<const double> state, KrylovMethod method, std::size_t k);

/// Explicit reaction term of the Allen-Cahn equation, -(u^3 - u).
Vector allen_cahn_reaction(std::span<const double> u);

}  // namespace frakry::solvers
