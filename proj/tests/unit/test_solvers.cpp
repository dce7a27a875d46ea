#include <cmath>
#include <random>

#include "doctest.h"
#include "frakry/discretize.hpp"
#include "frakry/errors.hpp"
#include "frakry/solvers.hpp"
#include "support.hpp"

using namespace frakry;
using namespace frakry::solvers;
using discretize::FdLaplacian;
using discretize::GridProblem;
using discretize::RhsExpr;

namespace {

const KrylovMethod kMethods[] = {KrylovMethod::RationalJacobi, KrylovMethod::Polynomial, KrylovMethod::Extended,
                                 KrylovMethod::ShiftInvert};

double sup_norm(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("scheme and time grid validation") {
  CHECK_THROWS_AS(SteppingScheme::backward_euler(0.0, 0.1).validate(), DomainError);
  CHECK_THROWS_AS((TimeGrid{1.0, 1.0, 4}).validate(), DomainError);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 0}).validate(), DomainError);
  CHECK((TimeGrid{0.0, 2.0, 8}).delta_t() == 0.25);
  CHECK(SteppingScheme::backward_euler(3.0, 0.5).nu() == 1.5);
}

TEST_CASE("steady problems with eigenvector data are exact at k = 1") {
  const auto line = GridProblem::line(64, 1.4);
  const auto square = GridProblem::square(32, 32, 1.7);
  for (auto method : kMethods) {
    auto s = discretize::sample_rhs(line, RhsExpr::Sin1D);
    auto u = solve_steady(line, s, method, 1);
    const double l1 = discretize::laplacian_eigenvalue_1d(1, 64);
    for (auto& x : s) x *= std::pow(l1, -0.7);
    CHECK(support::rel_err(s, u) <= 1e-12);

    auto s2 = discretize::sample_rhs(square, RhsExpr::Sin2D);
    auto u2 = solve_steady(square, s2, method, 1);
    const double l11 = 2 * discretize::laplacian_eigenvalue_1d(1, 32);
    for (auto& x : s2) x *= std::pow(l11, -0.85);
    CHECK(support::rel_err(s2, u2) <= 1e-12);
  }
}

TEST_CASE("linear evolution of an eigenvector follows the scalar recursion") {
  const FdLaplacian a(GridProblem::square(16, 16, 1.5));
  const auto u0 = discretize::sample_rhs(a.grid(), RhsExpr::Sin2D);
  const auto scheme = SteppingScheme::backward_euler(1.0, 1.0 / 16);
  const double factor = 1 / (1 + scheme.nu() * std::pow(a.bounds().lambda_min, 0.75));
  for (auto method : kMethods) {
    auto traj = run_linear_evolution(a, scheme, u0, TimeGrid{0.0, 1.0, 16}, method, 5);
    REQUIRE(traj.size() == 17);
    Vector expect = u0;
    for (std::size_t m = 1; m < traj.size(); ++m) {
      for (auto& x : expect) x *= factor;
      CHECK(support::rel_err(expect, traj[m]) <= 1e-12);
    }
  }
  auto zero = run_linear_evolution(a, scheme, Vector(a.order(), 0.0), TimeGrid{0.0, 1.0, 16},
                                   KrylovMethod::RationalJacobi, 10);
  for (const auto& state : zero) CHECK(sup_norm(state) == 0.0);
  CHECK_THROWS_AS(run_linear_evolution(a, scheme, u0, TimeGrid{0.0, 2.0, 16}, KrylovMethod::Polynomial, 3),
                  DomainError);
}

TEST_CASE("step with a source adds dt times the source") {
  const FdLaplacian a(GridProblem::square(12, 12, 1.5));
  const auto scheme = SteppingScheme::backward_euler(0.5, 0.1);
  std::mt19937_64 rng(13);
  auto state = support::uniform(a.order(), rng);
  auto source = support::uniform(a.order(), rng);
  auto rhs = state;
  linalg::axpy(0.1, source, rhs);
  auto exact = discretize::spectral_oracle_apply(a.grid(), TargetFunction::frac_resolvent(1.5, scheme.nu()), rhs);
  auto u = step_linear(a, scheme, state, source, KrylovMethod::RationalJacobi, 30);
  CHECK(support::rel_err(exact, u) <= 1e-10);
}

TEST_CASE("heat problem: error decreases in k and the sup norm does not grow") {
  const FdLaplacian a(GridProblem::square(64, 64, 1.5));
  const auto u0 = discretize::sample_rhs(a.grid(), RhsExpr::PolyBump2D);
  const auto scheme = SteppingScheme::backward_euler(1.0, 1.0 / 64);
  const auto exact = discretize::spectral_oracle_apply(a.grid(), TargetFunction::frac_resolvent(1.5, scheme.nu()), u0);
  double prev = 0.0;
  for (std::size_t k : {5u, 10u, 15u, 20u, 25u, 30u}) {
    const double err = support::rel_err(exact, step_linear(a, scheme, u0, {}, KrylovMethod::RationalJacobi, k));
    if (prev > 0.0) CHECK(err <= 10 * prev);
    prev = err;
  }
  auto traj = run_linear_evolution(a, scheme, u0, TimeGrid{0.0, 1.0, 64}, KrylovMethod::RationalJacobi, 20);
  for (std::size_t m = 1; m < traj.size(); ++m) CHECK(sup_norm(traj[m]) <= sup_norm(traj[m - 1]) * (1 + 1e-12));
}

TEST_CASE("alpha = 2 routes to the banded resolvent") {
  const FdLaplacian a(GridProblem::square(20, 20, 2.0));
  std::mt19937_64 rng(21);
  auto state = support::uniform(a.order(), rng);
  const auto scheme = SteppingScheme::backward_euler(1.0, 0.01);
  // (I + dt mu A) x = state, assembled independently through the banded matrix.
  auto m = a.banded();
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t d = 0; d <= std::min(i, m.bandwidth()); ++d) m.band(i, d) *= scheme.nu();
  auto direct = linalg::banded_cholesky_solve(m.shifted(1.0), state);
  for (auto method : kMethods) CHECK(support::rel_err(direct, step_linear(a, scheme, state, {}, method, 10)) <= 1e-10);
}

TEST_CASE("IMEX Allen-Cahn step") {
  const FdLaplacian a(GridProblem::square(24, 24, 1.5));
  const auto scheme = SteppingScheme::imex_backward_euler(1e-3, 1e-2);
  CHECK(sup_norm(step_imex_allen_cahn(a, scheme, Vector(a.order(), 0.0), KrylovMethod::RationalJacobi, 10)) == 0.0);
  auto u = discretize::sample_rhs(a.grid(), RhsExpr::AllenCahnInit2D);
  auto rhs = u;
  linalg::axpy(1e-2, allen_cahn_reaction(u), rhs);
  auto exact = discretize::spectral_oracle_apply(a.grid(), TargetFunction::frac_resolvent(1.5, scheme.nu()), rhs);
  CHECK(support::rel_err(exact, step_imex_allen_cahn(a, scheme, u, KrylovMethod::RationalJacobi, 30)) <= 1e-10);
  Vector bad = u;
  bad[3] = std::nan("");
  CHECK_THROWS_AS(step_imex_allen_cahn(a, scheme, bad, KrylovMethod::RationalJacobi, 10), DomainError);
  CHECK(allen_cahn_reaction(Vector{2.0})[0] == -6.0);
}
