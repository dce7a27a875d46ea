#include "frakry/discretize.hpp"

#include <cmath>
#include <numbers>

#include "frakry/errors.hpp"

namespace frakry::discretize {

namespace {

linalg::BandedSpd assemble(const GridProblem& g) {
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  if (g.dimension == 1) {
    linalg::BandedSpd m(g.nx, 1);
    for (std::size_t i = 0; i < g.nx; ++i) {
      m.band(i, 0) = 2.0 * ihx2;
      if (i > 0) m.band(i, 1) = -ihx2;
    }
    return m;
  }
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  const std::size_t n = g.size();
  linalg::BandedSpd m(n, g.nx);
  for (std::size_t jy = 0; jy < g.ny; ++jy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const std::size_t p = ix + g.nx * jy;
      m.set(p, p, 2.0 * ihx2 + 2.0 * ihy2);
      if (ix > 0) m.set(p, p - 1, -ihx2);
      if (jy > 0) m.set(p, p - g.nx, -ihy2);
    }
  return m;
}

// In-place orthonormal sine transform along one axis of a row-major
// (count x len) or strided layout. The transform is its own inverse.
class SineTransform {
 public:
  explicit SineTransform(std::size_t n) : n_(n), table_(2 * (n + 1)) {
    const double h = 1.0 / static_cast<double>(n + 1);
    for (std::size_t m = 0; m < table_.size(); ++m)
      table_[m] = std::sqrt(2.0 * h) * std::sin(std::numbers::pi * static_cast<double>(m) * h);
  }

  // out[i] = sum_j S(i, j) in[j], 1-based indices in the sine argument.
  void apply(std::span<const double> in, std::span<double> out, std::size_t in_stride,
             std::size_t out_stride) const {
    const std::size_t period = table_.size();
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      std::size_t idx = 0;
      const std::size_t step = (i + 1) % period;
      for (std::size_t j = 0; j < n_; ++j) {
        idx += step;
        if (idx >= period) idx -= period;
        s += table_[idx] * in[j * in_stride];
      }
      out[i * out_stride] = s;
    }
  }

 private:
  std::size_t n_;
  Vector table_;
};

// out = S_2D^T-like transform: along x then along y (x fastest in storage).
Vector transform(const GridProblem& g, std::span<const double> v) {
  if (g.dimension == 1) {
    Vector out(g.nx);
    SineTransform(g.nx).apply(v, out, 1, 1);
    return out;
  }
  const SineTransform tx(g.nx), ty(g.ny);
  Vector tmp(g.size()), out(g.size());
  for (std::size_t jy = 0; jy < g.ny; ++jy)
    tx.apply(v.subspan(jy * g.nx, g.nx), std::span(tmp).subspan(jy * g.nx, g.nx), 1, 1);
  for (std::size_t ix = 0; ix < g.nx; ++ix)
    ty.apply(std::span<const double>(tmp).subspan(ix), std::span(out).subspan(ix), g.nx, g.nx);
  return out;
}

}  // namespace

GridProblem GridProblem::line(std::size_t nx, double alpha) {
  GridProblem g{1, nx, 1, alpha};
  g.validate();
  return g;
}

GridProblem GridProblem::square(std::size_t nx, std::size_t ny, double alpha) {
  GridProblem g{2, nx, ny, alpha};
  g.validate();
  return g;
}

void GridProblem::validate() const {
  if (dimension != 1 && dimension != 2) throw DomainError("grid: dimension must be 1 or 2");
  if (nx < 1 || (dimension == 2 && ny < 1)) throw DomainError("grid: need at least one interior point per axis");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("grid: alpha must lie in (1, 2]");
}

double laplacian_eigenvalue_1d(std::size_t j, std::size_t n) {
  const double h = 1.0 / static_cast<double>(n + 1);
  const double s = std::sin(0.5 * static_cast<double>(j) * std::numbers::pi * h);
  return 4.0 * s * s / (h * h);
}

FdLaplacian::FdLaplacian(GridProblem grid) : grid_(grid), cache_((grid.validate(), assemble(grid))) {
  if (grid_.dimension == 1) {
    bounds_ = {laplacian_eigenvalue_1d(1, grid_.nx), laplacian_eigenvalue_1d(grid_.nx, grid_.nx)};
  } else {
    bounds_ = {laplacian_eigenvalue_1d(1, grid_.nx) + laplacian_eigenvalue_1d(1, grid_.ny),
               laplacian_eigenvalue_1d(grid_.nx, grid_.nx) + laplacian_eigenvalue_1d(grid_.ny, grid_.ny)};
  }
}

void FdLaplacian::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != order() || y.size() != order()) throw DomainError("FdLaplacian::apply: size mismatch");
  const std::size_t nx = grid_.nx;
  const double ihx2 = 1.0 / (grid_.hx() * grid_.hx());
  if (grid_.dimension == 1) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double left = i > 0 ? x[i - 1] : 0.0;
      const double right = i + 1 < nx ? x[i + 1] : 0.0;
      y[i] = (2.0 * x[i] - left - right) * ihx2;
    }
    return;
  }
  const std::size_t ny = grid_.ny;
  const double ihy2 = 1.0 / (grid_.hy() * grid_.hy());
  for (std::size_t jy = 0; jy < ny; ++jy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t p = ix + nx * jy;
      const double west = ix > 0 ? x[p - 1] : 0.0;
      const double east = ix + 1 < nx ? x[p + 1] : 0.0;
      const double south = jy > 0 ? x[p - nx] : 0.0;
      const double north = jy + 1 < ny ? x[p + nx] : 0.0;
      y[p] = (2.0 * x[p] - west - east) * ihx2 + (2.0 * x[p] - south - north) * ihy2;
    }
}

Vector FdLaplacian::solve_shifted(double shift, std::span<const double> b) const {
  if (b.size() != order()) throw DomainError("FdLaplacian::solve_shifted: size mismatch");
  return cache_.solve(shift, b);
}

FdLaplacian fd_laplacian(const GridProblem& grid) { return FdLaplacian(grid); }

Vector spectral_oracle_apply(const GridProblem& grid, const std::function<double(double)>& f,
                             std::span<const double> v) {
  grid.validate();
  if (v.size() != grid.size()) throw DomainError("spectral_oracle_apply: vector size does not match grid");
  Vector c = transform(grid, v);
  if (grid.dimension == 1) {
    for (std::size_t i = 0; i < grid.nx; ++i) c[i] *= f(laplacian_eigenvalue_1d(i + 1, grid.nx));
  } else {
    Vector lx(grid.nx), ly(grid.ny);
    for (std::size_t i = 0; i < grid.nx; ++i) lx[i] = laplacian_eigenvalue_1d(i + 1, grid.nx);
    for (std::size_t j = 0; j < grid.ny; ++j) ly[j] = laplacian_eigenvalue_1d(j + 1, grid.ny);
    for (std::size_t j = 0; j < grid.ny; ++j)
      for (std::size_t i = 0; i < grid.nx; ++i) c[i + grid.nx * j] *= f(lx[i] + ly[j]);
  }
  return transform(grid, c);
}

Vector spectral_oracle_apply(const GridProblem& grid, const TargetFunction& target, std::span<const double> v) {
  target.validate();
  return spectral_oracle_apply(grid, [&target](double z) { return target(z); }, v);
}

std::string_view to_string(RhsExpr expr) {
  switch (expr) {
    case RhsExpr::Sin1D:
      return "sin1d";
    case RhsExpr::Sin2D:
      return "sin2d";
    case RhsExpr::PolyBump2D:
      return "polybump2d";
    case RhsExpr::AllenCahnInit2D:
      return "allencahninit2d";
  }
  return "unknown";
}

Vector sample_rhs(const GridProblem& grid, RhsExpr expr) {
  grid.validate();
  const bool wants_1d = expr == RhsExpr::Sin1D;
  if (wants_1d != (grid.dimension == 1))
    throw DomainError("sample_rhs: expression " + std::string(to_string(expr)) +
                      " does not match grid dimension " + std::to_string(grid.dimension));
  constexpr double pi = std::numbers::pi;
  Vector out(grid.size());
  if (grid.dimension == 1) {
    for (std::size_t i = 0; i < grid.nx; ++i) out[i] = std::sin(pi * static_cast<double>(i + 1) * grid.hx());
    return out;
  }
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double x = static_cast<double>(i + 1) * grid.hx();
      const double y = static_cast<double>(j + 1) * grid.hy();
      double value = 0.0;
      switch (expr) {
        case RhsExpr::Sin2D:
          value = std::sin(pi * x) * std::sin(pi * y);
          break;
        case RhsExpr::PolyBump2D:
          value = x * x * y * y * (1.0 - x) * (1.0 - y);
          break;
        case RhsExpr::AllenCahnInit2D:
          value = 0.25 * std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y);
          break;
        case RhsExpr::Sin1D:
          break;
      }
      out[i + grid.nx * j] = value;
    }
  return out;
}

}  // namespace frakry::discretize
