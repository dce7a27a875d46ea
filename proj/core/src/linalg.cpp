#include "frakry/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "frakry/errors.hpp"

namespace frakry::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxQlSweeps = 50;

// Implicit QL with Wilkinson-type shifts on (d, e), e[i] coupling i and i+1.
// Every Givens rotation is also applied to the columns of z (any number of
// rows), so z = I yields eigenvectors and z = first row of I yields only the
// first components.
void ql_implicit(Vector& d, Vector& e, DenseMatrix* z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const std::size_t zrows = z ? z->rows() : 0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (iter++ == kMaxQlSweeps) {
        throw NonConvergence("sym_tridiag_eigen: no convergence for eigenvalue " +
                             std::to_string(l) + " after " +
                             std::to_string(kMaxQlSweeps) + " sweeps");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (std::size_t k = 0; k < zrows; ++k) {
          const double zf = (*z)(k, i + 1);
          (*z)(k, i + 1) = s * (*z)(k, i) + c * zf;
          (*z)(k, i) = c * (*z)(k, i) - s * zf;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

std::vector<std::size_t> ascending_order(const Vector& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  return idx;
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ContractViolation("matrix product: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aip * b(p, j);
    }
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractViolation("matrix difference: shape mismatch");
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw ContractViolation("matrix-vector product: shape mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

// In-place LU with partial pivoting; returns false if a pivot is exactly zero.
bool lu_factor(DenseMatrix& a, std::vector<std::size_t>& perm) {
  const std::size_t n = a.rows();
  perm.resize(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const double lik = a(i, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  return true;
}

Vector lu_substitute(const DenseMatrix& lu, const std::vector<std::size_t>& perm,
                     std::span<const double> b) {
  const std::size_t n = lu.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

}  // namespace

Vector lu_solve(DenseMatrix a, Vector b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw ContractViolation("lu_solve: shape mismatch");
  std::vector<std::size_t> perm;
  if (!lu_factor(a, perm)) throw DomainError("lu_solve: singular matrix");
  return lu_substitute(a, perm, b);
}

std::optional<DenseMatrix> inverse(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw ContractViolation("inverse: matrix not square");
  const std::size_t n = a.rows();
  DenseMatrix lu = a;
  std::vector<std::size_t> perm;
  if (!lu_factor(lu, perm)) return std::nullopt;
  DenseMatrix inv(n, n);
  Vector unit(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[j] = 1.0;
    const Vector col = lu_substitute(lu, perm, unit);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

double SymTridiagonal::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < diag.size()) row += std::abs(offdiag[i]);
    m = std::max(m, row);
  }
  return m;
}

TridiagEigen sym_tridiag_eigen(const SymTridiagonal& t, bool want_vectors) {
  const std::size_t n = t.size();
  if (n > 0 && t.offdiag.size() != n - 1)
    throw ContractViolation("sym_tridiag_eigen: offdiag must have n-1 entries");
  for (double x : t.diag)
    if (!std::isfinite(x)) throw ContractViolation("sym_tridiag_eigen: non-finite entry");
  for (double x : t.offdiag)
    if (!std::isfinite(x)) throw ContractViolation("sym_tridiag_eigen: non-finite entry");

  Vector d = t.diag;
  Vector e = t.offdiag;
  TridiagEigen out;
  if (!want_vectors) {
    ql_implicit(d, e, nullptr);
    std::sort(d.begin(), d.end());
    out.eigenvalues = std::move(d);
    return out;
  }

  DenseMatrix first_row(1, n);
  if (n > 0) first_row(0, 0) = 1.0;
  ql_implicit(d, e, &first_row);
  const auto order = ascending_order(d);
  out.eigenvalues.resize(n);
  Vector first(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = d[order[j]];
    first[j] = first_row(0, order[j]);
  }
  out.first_components = std::move(first);
  return out;
}

SymEigen dense_sym_eigen(const DenseMatrix& b) {
  const std::size_t n = b.rows();
  if (b.cols() != n) throw ContractViolation("dense_sym_eigen: matrix not square");
  const double scale = b.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(b(i, j) - b(j, i)) > 1e-12 * scale)
        throw ContractViolation("dense_sym_eigen: matrix not symmetric");

  // Householder tridiagonalization, a = q t q^T.
  DenseMatrix a = b;
  DenseMatrix q = DenseMatrix::identity(n);
  Vector v;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    v.assign(len, 0.0);
    double xnorm = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = a(k + 1 + i, k);
      xnorm += v[i] * v[i];
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const double alpha = -std::copysign(xnorm, v[0]);
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    for (double& x : v) x /= vnorm;

    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += v[i] * a(k + 1 + i, j);
      for (std::size_t i = 0; i < len; ++i) a(k + 1 + i, j) -= 2.0 * v[i] * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < len; ++j) s += a(i, k + 1 + j) * v[j];
      for (std::size_t j = 0; j < len; ++j) a(i, k + 1 + j) -= 2.0 * s * v[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < len; ++j) s += q(i, k + 1 + j) * v[j];
      for (std::size_t j = 0; j < len; ++j) q(i, k + 1 + j) -= 2.0 * s * v[j];
    }
  }

  Vector d(n), e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = 0.5 * (a(i + 1, i) + a(i, i + 1));
  ql_implicit(d, e, &q);

  const auto order = ascending_order(d);
  SymEigen out{Vector(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = d[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = q(i, order[j]);
  }
  return out;
}

BandedSpd::BandedSpd(std::size_t n, std::size_t bandwidth)
    : n_(n), b_(n == 0 ? 0 : std::min(bandwidth, n - 1)), bands_(n * (b_ + 1), 0.0) {}

double BandedSpd::at(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i - j > b_) return 0.0;
  return band(i, i - j);
}

void BandedSpd::set(std::size_t i, std::size_t j, double value) {
  if (i < j) std::swap(i, j);
  if (i - j > b_) throw ContractViolation("BandedSpd::set: entry outside the band");
  band(i, i - j) = value;
}

BandedSpd BandedSpd::shifted(double shift) const {
  BandedSpd m = *this;
  for (std::size_t i = 0; i < n_; ++i) m.band(i, 0) += shift;
  return m;
}

void BandedSpd::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw ContractViolation("BandedSpd::multiply: size mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    y[i] += band(i, 0) * x[i];
    const std::size_t dmax = std::min(i, b_);
    for (std::size_t d = 1; d <= dmax; ++d) {
      const double mij = band(i, d);
      y[i] += mij * x[i - d];
      y[i - d] += mij * x[i];
    }
  }
}

Vector BandedSpd::multiply(std::span<const double> x) const {
  Vector y(n_);
  multiply(x, y);
  return y;
}

double BandedSpd::norm_inf() const {
  Vector rows(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    rows[i] += std::abs(band(i, 0));
    const std::size_t dmax = std::min(i, b_);
    for (std::size_t d = 1; d <= dmax; ++d) {
      rows[i] += std::abs(band(i, d));
      rows[i - d] += std::abs(band(i, d));
    }
  }
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

BandedCholesky::BandedCholesky(const BandedSpd& m) : factor_(m) {
  const std::size_t n = factor_.order();
  const std::size_t b = factor_.bandwidth();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t jlo = i > b ? i - b : 0;
    for (std::size_t j = jlo; j <= i; ++j) {
      double s = factor_.band(i, i - j);
      for (std::size_t p = jlo; p < j; ++p) s -= factor_.band(i, i - p) * factor_.band(j, j - p);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) throw NotSpd(i, s);
        factor_.band(i, 0) = std::sqrt(s);
      } else {
        factor_.band(i, i - j) = s / factor_.band(j, 0);
      }
    }
  }
}

void BandedCholesky::solve_in_place(std::span<double> x) const {
  const std::size_t n = factor_.order();
  const std::size_t b = factor_.bandwidth();
  if (x.size() != n) throw ContractViolation("BandedCholesky::solve: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    const std::size_t plo = i > b ? i - b : 0;
    for (std::size_t p = plo; p < i; ++p) s -= factor_.band(i, i - p) * x[p];
    x[i] = s / factor_.band(i, 0);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    const std::size_t phi = std::min(n - 1, i + b);
    for (std::size_t p = i + 1; p <= phi; ++p) s -= factor_.band(p, p - i) * x[p];
    x[i] = s / factor_.band(i, 0);
  }
}

Vector BandedCholesky::solve(std::span<const double> rhs) const {
  Vector x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

Vector banded_cholesky_solve(const BandedSpd& m, std::span<const double> rhs) {
  return BandedCholesky(m).solve(rhs);
}

GramSchmidtResult modified_gram_schmidt_step(std::span<const Vector> basis, Vector w) {
  GramSchmidtResult out;
  out.h.assign(basis.size(), 0.0);
  const double wnorm = norm2(w);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const double c = dot(basis[i], w);
      axpy(-c, basis[i], w);
      out.h[i] += c;
    }
  }
  out.h_next = norm2(w);
  if (out.h_next <= 1e-14 * wnorm || out.h_next == 0.0) return out;
  for (double& x : w) x /= out.h_next;
  out.v_next = std::move(w);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace frakry::linalg
