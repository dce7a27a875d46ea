#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "frakry/krylov.hpp"
#include "frakry/linalg.hpp"
#include "frakry/poles.hpp"

namespace frakry::discretize {

/// Finite-difference grid on the unit interval or square with homogeneous
/// Dirichlet data. Unknowns are interior nodes, x index fastest.
struct GridProblem {
  int dimension = 1;  // 1 or 2
  std::size_t nx = 1;
  std::size_t ny = 1;  // ignored in 1D
  double alpha = 1.5;

  static GridProblem line(std::size_t nx, double alpha);
  static GridProblem square(std::size_t nx, std::size_t ny, double alpha);

  void validate() const;
  std::size_t size() const noexcept { return dimension == 1 ? nx : nx * ny; }
  double hx() const noexcept { return 1.0 / static_cast<double>(nx + 1); }
  double hy() const noexcept { return 1.0 / static_cast<double>(ny + 1); }
};

/// j-th eigenvalue (1-based) of tridiag(-1, 2, -1) / h^2 with n interior points.
double laplacian_eigenvalue_1d(std::size_t j, std::size_t n);

/// Five-point (2D) or three-point (1D) negative Laplacian. Shifted solves use
/// banded Cholesky (bandwidth 1 in 1D, nx in 2D), cached per shift.
class FdLaplacian final : public SpdOperator {
 public:
  explicit FdLaplacian(GridProblem grid);

  std::size_t order() const override { return grid_.size(); }
  using SpdOperator::apply;
  void apply(std::span<const double> x, std::span<double> y) const override;
  Vector solve_shifted(double shift, std::span<const double> b) const override;
  SpectralBounds bounds() const override { return bounds_; }

  const GridProblem& grid() const noexcept { return grid_; }
  const linalg::BandedSpd& banded() const noexcept { return cache_.matrix(); }

 private:
  GridProblem grid_;
  SpectralBounds bounds_;
  ShiftedFactorCache cache_;
};

FdLaplacian fd_laplacian(const GridProblem& grid);

/// Exact f(A) v through the orthonormal discrete sine basis
/// s_j(i) = sqrt(2h) sin(i j pi h), applied per axis.
Vector spectral_oracle_apply(const GridProblem& grid, const std::function<double(double)>& f,
                             std::span<const double> v);
Vector spectral_oracle_apply(const GridProblem& grid, const TargetFunction& target,
                             std::span<const double> v);

enum class RhsExpr { Sin1D, Sin2D, PolyBump2D, AllenCahnInit2D };

std::string_view to_string(RhsExpr expr);

/// sin(pi x); sin(pi x) sin(pi y); x^2 y^2 (1-x)(1-y); 0.25 sin(2 pi x) sin(2 pi y)
/// sampled at interior nodes. Throws DomainError on a dimension mismatch.
Vector sample_rhs(const GridProblem& grid, RhsExpr expr);

}  // namespace frakry::discretize
