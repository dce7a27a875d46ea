#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "frakry/linalg.hpp"
#include "frakry/poles.hpp"

namespace frakry {

struct SpectralBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Symmetric positive definite operator seen through products and shifted
/// solves. Implementations must be safe for concurrent const use.
class SpdOperator {
 public:
  virtual ~SpdOperator() = default;

  virtual std::size_t order() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  /// Solves (shift * I + A) x = b for shift >= 0.
  virtual Vector solve_shifted(double shift, std::span<const double> b) const = 0;
  virtual SpectralBounds bounds() const = 0;

  Vector apply(std::span<const double> x) const {
    Vector y(order());
    apply(x, y);
    return y;
  }
};

/// Banded Cholesky factors of (shift * I + M), keyed by shift, least
/// recently used evicted beyond `capacity`. Thread safe.
class ShiftedFactorCache {
 public:
  explicit ShiftedFactorCache(linalg::BandedSpd matrix, std::size_t capacity = 48);

  const linalg::BandedSpd& matrix() const noexcept { return matrix_; }
  Vector solve(double shift, std::span<const double> b) const;
  std::size_t cached() const;

 private:
  using Entry = std::pair<double, std::shared_ptr<const linalg::BandedCholesky>>;

  linalg::BandedSpd matrix_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  mutable std::list<Entry> entries_;  // most recent first
};

/// An explicitly stored banded SPD matrix with caller-supplied spectral bounds.
class BandedOperator final : public SpdOperator {
 public:
  BandedOperator(linalg::BandedSpd matrix, SpectralBounds bounds);

  std::size_t order() const override { return cache_.matrix().order(); }
  using SpdOperator::apply;
  void apply(std::span<const double> x, std::span<double> y) const override;
  Vector solve_shifted(double shift, std::span<const double> b) const override;
  SpectralBounds bounds() const override { return bounds_; }

  const linalg::BandedSpd& matrix() const noexcept { return cache_.matrix(); }

 private:
  ShiftedFactorCache cache_;
  SpectralBounds bounds_;
};

enum class KrylovMethod { RationalJacobi, Polynomial, Extended, ShiftInvert };

std::string_view to_string(KrylovMethod method);
/// Accepts "jacobi", "poly", "extended", "shiftinvert".
std::optional<KrylovMethod> parse_method(std::string_view name);

struct KrylovBasis {
  KrylovMethod method = KrylovMethod::Polynomial;
  std::vector<Vector> v;   // orthonormal columns v_1..v_m
  linalg::DenseMatrix h;   // recurrence coefficients, (m+1) x m for rational bases
  Vector shifts;           // pole xi_j used in column j (rational bases only)
  Vector v_next;           // v_{m+1} from the closing column; empty after breakdown
  double beta = 0.0;       // |seed|
  bool invariant = false;  // lucky breakdown: the subspace is A-invariant
  std::size_t solves = 0;
  std::size_t matvecs = 0;

  std::size_t dim() const noexcept { return v.size(); }
};

/// Rational Arnoldi: w_j = (xi_j I + A)^{-1} v_j orthogonalized against
/// v_1..v_j. Uses xi_1..xi_{k-1} to grow a k-dimensional basis; xi_k closes
/// the square recurrence matrix H_k.
KrylovBasis rational_arnoldi(const SpdOperator& a, std::span<const double> v, std::span<const double> xi);
KrylovBasis rational_arnoldi(const SpdOperator& a, std::span<const double> v, const poles::PoleSet& poles);

KrylovBasis polynomial_krylov_basis(const SpdOperator& a, std::span<const double> v, std::size_t k);
/// span{v, A^-1 v, A v, A^-2 v, A^2 v, ...}; floor(k/2) solves.
KrylovBasis extended_krylov_basis(const SpdOperator& a, std::span<const double> v, std::size_t k);
/// Single repeated pole sqrt(lambda_min * lambda_max), applied as (sigma I + A)^{-1}.
KrylovBasis shift_invert_basis(const SpdOperator& a, std::span<const double> v, std::size_t k);

double shift_invert_pole(const SpectralBounds& bounds);

/// Closed form V^T A V = (I - H_m D_m) H_m^{-1}, D_m = diag(shifts), for a
/// rational basis. nullopt when H_m is singular or the basis is not rational.
/// Exact only when the closing column breaks down; in general the residual
/// term below is missing.
std::optional<linalg::DenseMatrix> closed_form_projection(const KrylovBasis& basis);

/// The full identity: closed form minus h_{m+1,m} (V^T A v_{m+1}) e_m^T H_m^{-1}.
/// Costs one extra product with A.
std::optional<linalg::DenseMatrix> closed_form_projection(const KrylovBasis& basis, const SpdOperator& a);

struct ProjectedMatrix {
  enum class CrossCheck { NotApplicable, Passed, Failed, SkippedSingular };

  linalg::DenseMatrix s;  // symmetrized V^T A V
  CrossCheck cross_check = CrossCheck::NotApplicable;
  double closed_form_discrepancy = 0.0;  // max |S - closed form| / max |S|
  double full_identity_discrepancy = 0.0;  // same, residual term included
};

/// Explicit V^T (A V), symmetrized. For rational bases also compares against
/// closed_form_projection at tolerance 1e-8 (reported, never thrown).
ProjectedMatrix projected_matrix(const KrylovBasis& basis, const SpdOperator& a);

struct KrylovOptions {
  std::optional<double> tau;  // overrides the Lambert-W choice for RationalJacobi
};

struct MatrixFunctionResult {
  Vector value;
  std::size_t dim = 0;
  bool invariant = false;
  std::size_t solves = 0;
};

/// Evaluates beta V f(V^T A V) e_1 for a fixed (target, method, k). Poles are
/// built once on first use with a given operator's bounds and reused.
class MatrixFunctionApplier {
 public:
  MatrixFunctionApplier(TargetFunction target, KrylovMethod method, std::size_t k,
                        KrylovOptions options = {});

  MatrixFunctionResult apply(const SpdOperator& a, std::span<const double> v) const;

  const TargetFunction& target() const noexcept { return target_; }
  KrylovMethod method() const noexcept { return method_; }
  std::size_t k() const noexcept { return k_; }
  /// Pole set for `a` (RationalJacobi only); computed and cached on first call.
  const poles::PoleSet& pole_set(const SpdOperator& a) const;

 private:
  TargetFunction target_;
  KrylovMethod method_;
  std::size_t k_;
  KrylovOptions options_;
  mutable std::mutex mutex_;
  mutable std::optional<std::pair<SpectralBounds, std::shared_ptr<const poles::PoleSet>>> poles_;
};

/// f(A) v by projection onto a k-dimensional Krylov space of the given kind.
/// Throws SpectralLeak if a Rayleigh value leaves the operator's bounds
/// padded by 1e-8 relative.
Vector apply_matrix_function(const SpdOperator& a, std::span<const double> v,
                             const TargetFunction& target, KrylovMethod method, std::size_t k,
                             const KrylovOptions& options = {});

/// Shared tail: f on the projected spectrum, lifted back through the basis.
MatrixFunctionResult evaluate_on_basis(const KrylovBasis& basis, const SpdOperator& a,
                                       const TargetFunction& target);

}  // namespace frakry
