#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace frakry {

using Vector = std::vector<double>;

namespace linalg {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix transpose() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

/// Solves a * x = b for square a with partial pivoting. Small systems only.
Vector lu_solve(DenseMatrix a, Vector b);
/// Inverse of a square matrix by partial-pivoting LU; nullopt if singular.
std::optional<DenseMatrix> inverse(const DenseMatrix& a);

struct SymTridiagonal {
  Vector diag;
  Vector offdiag;  // size diag.size() - 1 (or empty when diag is empty)

  std::size_t size() const noexcept { return diag.size(); }
  double norm_inf() const;
};

struct TridiagEigen {
  Vector eigenvalues;                       // ascending
  std::optional<Vector> first_components;  // first entry of each unit eigenvector
};

/// Implicit QL with Wilkinson shifts.
TridiagEigen sym_tridiag_eigen(const SymTridiagonal& t, bool want_vectors);

struct SymEigen {
  Vector eigenvalues;        // ascending
  DenseMatrix eigenvectors;  // column j pairs with eigenvalues[j]
};

/// Householder reduction to tridiagonal form, then QL with accumulated
/// rotations. Throws ContractViolation if b is not symmetric to 1e-12 * |b|.
SymEigen dense_sym_eigen(const DenseMatrix& b);

/// Symmetric banded matrix, lower bands stored per row:
/// band(i, d) holds M(i, i - d) for d in [0, min(i, bandwidth)].
class BandedSpd {
 public:
  BandedSpd(std::size_t n, std::size_t bandwidth);

  std::size_t order() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return b_; }

  double& band(std::size_t i, std::size_t d) { return bands_[i * (b_ + 1) + d]; }
  double band(std::size_t i, std::size_t d) const { return bands_[i * (b_ + 1) + d]; }

  /// Element access for any (i, j) with |i - j| <= bandwidth; zero outside.
  double at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);

  /// Copy with `shift` added to the diagonal.
  BandedSpd shifted(double shift) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector multiply(std::span<const double> x) const;

  /// Infinity norm.
  double norm_inf() const;

 private:
  std::size_t n_;
  std::size_t b_;
  std::vector<double> bands_;
};

/// Banded Cholesky factor L with M = L L^T. Factor once, solve many.
class BandedCholesky {
 public:
  /// Throws NotSpd carrying the failing pivot index.
  explicit BandedCholesky(const BandedSpd& m);

  std::size_t order() const noexcept { return factor_.order(); }
  Vector solve(std::span<const double> rhs) const;
  void solve_in_place(std::span<double> x) const;

 private:
  BandedSpd factor_;
};

Vector banded_cholesky_solve(const BandedSpd& m, std::span<const double> rhs);

struct GramSchmidtResult {
  Vector h;                     // coefficients against the existing columns
  double h_next = 0.0;          // norm of the orthogonal remainder
  std::optional<Vector> v_next; // empty on breakdown
  bool breakdown() const noexcept { return !v_next.has_value(); }
};

/// Modified Gram-Schmidt with one unconditional reorthogonalization pass.
/// Breakdown when the remainder norm is <= 1e-14 * |w|.
GramSchmidtResult modified_gram_schmidt_step(std::span<const Vector> basis, Vector w);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace linalg
}  // namespace frakry
