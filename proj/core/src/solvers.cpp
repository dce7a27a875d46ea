#include "frakry/solvers.hpp"

#include <cmath>

#include "frakry/errors.hpp"

namespace frakry::solvers {

void TimeGrid::validate() const {
  if (!(t_end > t0)) throw DomainError("time grid: need T > t0");
  if (nt < 1) throw DomainError("time grid: need at least one step");
}

SteppingScheme SteppingScheme::backward_euler(double mu, double dt) {
  SteppingScheme s;
  s.kind = Kind::BackwardEuler;
  s.mu = mu;
  s.dt = dt;
  s.validate();
  return s;
}

SteppingScheme SteppingScheme::imex_backward_euler(double mu, double dt) {
  SteppingScheme s = backward_euler(mu, dt);
  s.kind = Kind::ImexBackwardEuler;
  return s;
}

void SteppingScheme::validate() const {
  if (!(mu > 0.0)) throw DomainError("stepping scheme: mu must be > 0");
  if (!(dt > 0.0)) throw DomainError("stepping scheme: dt must be > 0");
  if (!(alpha_l > 0.0) || !(beta_l > 0.0)) throw DomainError("stepping scheme: need alpha_l, beta_l > 0");
}

Vector solve_steady(const discretize::FdLaplacian& a, std::span<const double> rhs, KrylovMethod method,
                    std::size_t k) {
  return apply_matrix_function(a, rhs, TargetFunction::inverse_frac_power(a.grid().alpha), method, k);
}

Vector solve_steady(const discretize::GridProblem& grid, std::span<const double> rhs, KrylovMethod method,
                    std::size_t k) {
  const discretize::FdLaplacian a(grid);
  return solve_steady(a, rhs, method, k);
}

Stepper::Stepper(const discretize::FdLaplacian& a, SteppingScheme scheme, KrylovMethod method, std::size_t k,
                 KrylovOptions options)
    : a_(a), scheme_(scheme), target_(TargetFunction::frac_resolvent(a.grid().alpha, scheme.nu())) {
  scheme_.validate();
  if (target_.is_fractional()) applier_ = std::make_unique<MatrixFunctionApplier>(target_, method, k, options);
}

Vector Stepper::apply_resolvent(std::span<const double> rhs) const {
  if (rhs.size() != a_.order()) throw DomainError("stepper: state size does not match grid");
  if (!applier_) {
    // (I + nu A)^{-1} b = (A + I/nu)^{-1} b / nu
    const double nu = target_.nu;
    Vector x = a_.solve_shifted(1.0 / nu, rhs);
    for (double& xi : x) xi /= nu;
    return x;
  }
  bool all_zero = true;
  for (double x : rhs) all_zero = all_zero && x == 0.0;
  if (all_zero) return Vector(rhs.size(), 0.0);
  return applier_->apply(a_, rhs).value;
}

Vector Stepper::step_linear(std::span<const double> state, std::span<const double> source) const {
  if (state.size() != a_.order() || (!source.empty() && source.size() != a_.order()))
    throw DomainError("step_linear: size mismatch");
  Vector rhs(state.begin(), state.end());
  if (!source.empty()) linalg::axpy(scheme_.dt, source, rhs);
  return apply_resolvent(rhs);
}

Vector Stepper::step_imex_allen_cahn(std::span<const double> state) const {
  for (double x : state)
    if (!std::isfinite(x)) throw DomainError("step_imex_allen_cahn: state is not finite");
  const Vector reaction = allen_cahn_reaction(state);
  Vector rhs(state.begin(), state.end());
  linalg::axpy(scheme_.dt * scheme_.gamma_0, reaction, rhs);
  return apply_resolvent(rhs);
}

Vector allen_cahn_reaction(std::span<const double> u) {
  Vector s(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) s[i] = -(u[i] * u[i] * u[i] - u[i]);
  return s;
}

Vector step_linear(const discretize::FdLaplacian& a, const SteppingScheme& scheme, std::span<const double> state,
                   std::span<const double> source, KrylovMethod method, std::size_t k) {
  return Stepper(a, scheme, method, k).step_linear(state, source);
}

std::vector<Vector> run_linear_evolution(const discretize::FdLaplacian& a, const SteppingScheme& scheme,
                                         std::span<const double> u0, const TimeGrid& time, KrylovMethod method,
                                         std::size_t k) {
  time.validate();
  if (std::abs(scheme.dt - time.delta_t()) > 1e-12 * time.delta_t())
    throw DomainError("run_linear_evolution: scheme dt does not match the time grid step");
  const Stepper stepper(a, scheme, method, k);
  std::vector<Vector> trajectory;
  trajectory.reserve(time.nt + 1);
  trajectory.emplace_back(u0.begin(), u0.end());
  for (std::size_t m = 0; m < time.nt; ++m) trajectory.push_back(stepper.step_linear(trajectory.back(), {}));
  return trajectory;
}

Vector step_imex_allen_cahn(const discretize::FdLaplacian& a, const SteppingScheme& scheme,
                            std::span<const double> state, KrylovMethod method, std::size_t k) {
  return Stepper(a, scheme, method, k).step_imex_allen_cahn(state);
}

}  // namespace frakry::solvers
