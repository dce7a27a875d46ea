#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "frakry/errors.hpp"
#include "frakry/linalg.hpp"
#include "support.hpp"

using namespace frakry;
using namespace frakry::linalg;

namespace {

// Number of eigenvalues of T below x (Sturm sequence count).
std::size_t sturm_count(const SymTridiagonal& t, double x) {
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double off = i == 0 ? 0.0 : t.offdiag[i - 1];
    d = t.diag[i] - x - (i == 0 ? 0.0 : off * off / d);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

// j-th smallest eigenvalue by bisection on the Sturm count.
double sturm_eigenvalue(const SymTridiagonal& t, std::size_t j) {
  double lo = -t.norm_inf() - 1.0, hi = t.norm_inf() + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(t, mid) > j ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("tridiagonal eigenvalues: small closed forms") {
  auto e = sym_tridiag_eigen({{2, 2, 2}, {-1, -1}}, false);
  REQUIRE(e.eigenvalues.size() == 3);
  CHECK(e.eigenvalues[0] == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-15));
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(e.eigenvalues[2] == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK_FALSE(e.first_components.has_value());

  CHECK(sym_tridiag_eigen({{5}, {}}, true).eigenvalues == Vector{5.0});
  auto two = sym_tridiag_eigen({{0, 0}, {1}}, true);
  CHECK(two.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(two.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(std::abs((*two.first_components)[0]) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("tridiagonal eigenvalues: second difference matrix of order 200") {
  const std::size_t n = 200;
  SymTridiagonal t{Vector(n, 2.0), Vector(n - 1, -1.0)};
  auto e = sym_tridiag_eigen(t, false);
  const double tol = 10 * std::numeric_limits<double>::epsilon() * t.norm_inf();
  for (std::size_t j = 0; j < n; ++j) {
    const double exact = 2.0 - 2.0 * std::cos((j + 1) * std::numbers::pi / (n + 1));
    CHECK(std::abs(e.eigenvalues[j] - exact) <= tol);
  }
}

TEST_CASE("tridiagonal eigenvalues: random matrices against Sturm bisection and trace") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    SymTridiagonal t{support::uniform(n, rng, -5, 5), support::uniform(n - 1, rng, -3, 3)};
    auto e = sym_tridiag_eigen(t, true);
    REQUIRE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
    double trace = 0.0, sum = 0.0, fc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      trace += t.diag[j];
      sum += e.eigenvalues[j];
      fc += (*e.first_components)[j] * (*e.first_components)[j];
      CHECK(std::abs(e.eigenvalues[j] - sturm_eigenvalue(t, j)) <= 1e-12 * t.norm_inf());
    }
    CHECK(std::abs(sum - trace) <= 1e-12 * t.norm_inf() * n);
    CHECK(fc == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dense symmetric eigendecomposition") {
  SUBCASE("identity and diagonal") {
    auto e = dense_sym_eigen(DenseMatrix::identity(3));
    for (double l : e.eigenvalues) CHECK(l == doctest::Approx(1.0));
    CHECK((e.eigenvectors.transpose() * e.eigenvectors - DenseMatrix::identity(3)).max_abs() <= 1e-12);
    DenseMatrix d(3, 3);
    d(0, 0) = 3, d(1, 1) = 1, d(2, 2) = 2;
    auto ed = dense_sym_eigen(d);
    CHECK(ed.eigenvalues == Vector{1, 2, 3});
  }
  SUBCASE("rank one") {
    const std::size_t n = 5;
    Vector v{1, 2, -1, 0.5, 3};
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
    DenseMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = v[i] * v[j];
    auto e = dense_sym_eigen(b);
    for (std::size_t j = 0; j + 1 < n; ++j) CHECK(std::abs(e.eigenvalues[j]) <= 1e-14);
    CHECK(e.eigenvalues.back() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("random SPD reconstruct to 1e-10 and orthogonal to 1e-12") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 1 + rng() % 30;
      std::vector<double> lam;
      auto a = support::random_spd_dense(n, rng, &lam);
      auto e = dense_sym_eigen(a);
      std::sort(lam.begin(), lam.end());
      for (std::size_t j = 0; j < n; ++j) CHECK(e.eigenvalues[j] == doctest::Approx(lam[j]).epsilon(1e-11));
      const auto& q = e.eigenvectors;
      CHECK((q.transpose() * q - DenseMatrix::identity(n)).max_abs() <= 1e-12);
      DenseMatrix l(n, n);
      for (std::size_t j = 0; j < n; ++j) l(j, j) = e.eigenvalues[j];
      CHECK((q * l * q.transpose() - a).max_abs() <= 1e-10 * a.max_abs());
    }
  }
  SUBCASE("asymmetric input rejected") {
    DenseMatrix b = DenseMatrix::identity(2);
    b(0, 1) = 1e-6;
    CHECK_THROWS_AS(dense_sym_eigen(b), ContractViolation);
  }
}

TEST_CASE("banded Cholesky") {
  SUBCASE("identity with zero bandwidth") {
    BandedSpd m(4, 0);
    for (std::size_t i = 0; i < 4; ++i) m.set(i, i, 1.0);
    Vector rhs{1, -2, 3, 0.5};
    CHECK(banded_cholesky_solve(m, rhs) == rhs);
  }
  SUBCASE("hand solve of the second difference matrix") {
    BandedSpd m(3, 1);
    for (std::size_t i = 0; i < 3; ++i) m.set(i, i, 2.0);
    m.set(1, 0, -1.0);
    m.set(2, 1, -1.0);
    auto x = banded_cholesky_solve(m, Vector{1, 0, 0});
    CHECK(x[0] == doctest::Approx(0.75));
    CHECK(x[1] == doctest::Approx(0.5));
    CHECK(x[2] == doctest::Approx(0.25));
  }
  SUBCASE("100 random SPD band matrices meet the residual bound") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng() % 80;
      const std::size_t b = rng() % 8;
      auto m = support::random_spd_banded(n, b, rng);
      auto rhs = support::uniform(n, rng);
      BandedCholesky chol(m);
      auto x = chol.solve(rhs);
      auto r = m.multiply(x);
      for (std::size_t i = 0; i < n; ++i) r[i] -= rhs[i];
      CHECK(norm2(r) <= 1e-12 * (m.norm_inf() * norm2(x) + norm2(rhs)));
      // Same factor, second right-hand side, against dense LU.
      auto rhs2 = support::uniform(n, rng);
      CHECK(support::max_abs_diff(chol.solve(rhs2), lu_solve(support::to_dense(m), rhs2)) <= 1e-10);
    }
  }
  SUBCASE("indefinite matrix reports the pivot") {
    BandedSpd m(3, 1);
    m.set(0, 0, 1.0);
    m.set(1, 1, 1.0);
    m.set(2, 2, 1.0);
    m.set(1, 0, 2.0);
    try {
      BandedCholesky chol(m);
      FAIL("expected NotSpd");
    } catch (const NotSpd& e) {
      CHECK(e.pivot() == 1);
      CHECK(e.value() <= 0.0);
    }
  }
}

TEST_CASE("Gram-Schmidt step") {
  const Vector e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  SUBCASE("orthogonal input") {
    auto r = modified_gram_schmidt_step(std::vector<Vector>{e1}, e2);
    CHECK(r.h == Vector{0.0});
    CHECK(r.h_next == doctest::Approx(1.0));
    CHECK(*r.v_next == e2);
  }
  SUBCASE("input in the span breaks down") {
    auto r = modified_gram_schmidt_step(std::vector<Vector>{e1}, Vector{2, 0, 0});
    CHECK(r.breakdown());
    CHECK(r.h[0] == doctest::Approx(2.0));
  }
  SUBCASE("diagonal direction") {
    const double s = 1 / std::sqrt(3.0);
    auto r = modified_gram_schmidt_step(std::vector<Vector>{e1, e2}, Vector{s, s, s});
    CHECK(r.h[0] == doctest::Approx(s));
    CHECK(r.h[1] == doctest::Approx(s));
    CHECK(r.h_next == doctest::Approx(s));
    CHECK(support::max_abs_diff(*r.v_next, e3) <= 1e-15);
  }
  SUBCASE("nearly dependent vectors stay orthonormal") {
    std::mt19937_64 rng(5);
    const std::size_t n = 60;
    std::vector<Vector> basis;
    auto w0 = support::uniform(n, rng);
    basis.push_back(w0);
    for (auto& x : basis[0]) x /= norm2(w0);
    for (int j = 0; j < 30; ++j) {
      // Mostly in the span, with a tiny fresh component.
      Vector w(n, 0.0);
      for (const auto& c : basis) axpy(1.0, c, w);
      auto fresh = support::uniform(n, rng);
      axpy(1e-9, fresh, w);
      auto r = modified_gram_schmidt_step(basis, w);
      REQUIRE_FALSE(r.breakdown());
      basis.push_back(*r.v_next);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        worst = std::max(worst, std::abs(dot(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
    CHECK(worst <= 1e-12);
  }
}
