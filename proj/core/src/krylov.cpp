#include "frakry/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "frakry/errors.hpp"

namespace frakry {

using linalg::DenseMatrix;

ShiftedFactorCache::ShiftedFactorCache(linalg::BandedSpd matrix, std::size_t capacity)
    : matrix_(std::move(matrix)), capacity_(std::max<std::size_t>(capacity, 1)) {}

Vector ShiftedFactorCache::solve(double shift, std::span<const double> b) const {
  if (!(shift >= 0.0)) throw DomainError("shifted solve: shift must be >= 0");
  std::shared_ptr<const linalg::BandedCholesky> factor;
  {
    std::lock_guard lock(mutex_);
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [shift](const Entry& e) { return e.first == shift; });
    if (it != entries_.end()) {
      entries_.splice(entries_.begin(), entries_, it);
      factor = entries_.front().second;
    }
  }
  if (!factor) {
    // Factor outside the lock; a racing duplicate is harmless.
    factor = std::make_shared<const linalg::BandedCholesky>(matrix_.shifted(shift));
    std::lock_guard lock(mutex_);
    entries_.emplace_front(shift, factor);
    while (entries_.size() > capacity_) entries_.pop_back();
  }
  return factor->solve(b);
}

std::size_t ShiftedFactorCache::cached() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

BandedOperator::BandedOperator(linalg::BandedSpd matrix, SpectralBounds bounds)
    : cache_(std::move(matrix)), bounds_(bounds) {
  if (!(bounds.lambda_min > 0.0) || !(bounds.lambda_min <= bounds.lambda_max))
    throw DomainError("BandedOperator: need 0 < lambda_min <= lambda_max");
}

void BandedOperator::apply(std::span<const double> x, std::span<double> y) const {
  cache_.matrix().multiply(x, y);
}

Vector BandedOperator::solve_shifted(double shift, std::span<const double> b) const {
  return cache_.solve(shift, b);
}

std::string_view to_string(KrylovMethod method) {
  switch (method) {
    case KrylovMethod::RationalJacobi:
      return "jacobi";
    case KrylovMethod::Polynomial:
      return "poly";
    case KrylovMethod::Extended:
      return "extended";
    case KrylovMethod::ShiftInvert:
      return "shiftinvert";
  }
  return "unknown";
}

std::optional<KrylovMethod> parse_method(std::string_view name) {
  for (auto m : {KrylovMethod::RationalJacobi, KrylovMethod::Polynomial, KrylovMethod::Extended,
                 KrylovMethod::ShiftInvert})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

namespace {

KrylovBasis start_basis(KrylovMethod method, const SpdOperator& a, std::span<const double> v, std::size_t k) {
  if (k == 0) throw DomainError("Krylov basis: dimension k must be >= 1");
  if (v.size() != a.order()) throw DomainError("Krylov basis: seed size does not match operator");
  KrylovBasis basis;
  basis.method = method;
  basis.beta = linalg::norm2(v);
  if (!(basis.beta > 0.0) || !std::isfinite(basis.beta))
    throw DomainError("Krylov basis: seed vector must be nonzero and finite");
  Vector v1(v.begin(), v.end());
  for (double& x : v1) x /= basis.beta;
  basis.v.reserve(k);
  basis.v.push_back(std::move(v1));
  return basis;
}

// Keeps columns [0, m) and rows [0, m] of h.
DenseMatrix trim(const DenseMatrix& h, std::size_t rows, std::size_t cols) {
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = h(i, j);
  return out;
}

KrylovBasis rational_impl(KrylovMethod method, const SpdOperator& a, std::span<const double> v,
                          std::span<const double> xi) {
  const std::size_t k = xi.size();
  KrylovBasis basis = start_basis(method, a, v, k);
  DenseMatrix h(k + 1, k);
  std::size_t columns = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (!(xi[j] >= 0.0)) throw DomainError("rational_arnoldi: poles must be positive");
    Vector w = a.solve_shifted(xi[j], basis.v[j]);
    ++basis.solves;
    auto gs = linalg::modified_gram_schmidt_step(basis.v, std::move(w));
    for (std::size_t i = 0; i <= j; ++i) h(i, j) = gs.h[i];
    h(j + 1, j) = gs.h_next;
    basis.shifts.push_back(xi[j]);
    columns = j + 1;
    if (gs.breakdown()) {
      h(j + 1, j) = 0.0;
      basis.invariant = true;
      break;
    }
    if (j + 1 < k)
      basis.v.push_back(std::move(*gs.v_next));
    else
      basis.v_next = std::move(*gs.v_next);
  }
  basis.h = trim(h, columns + 1, columns);
  return basis;
}

}  // namespace

KrylovBasis rational_arnoldi(const SpdOperator& a, std::span<const double> v, std::span<const double> xi) {
  return rational_impl(KrylovMethod::RationalJacobi, a, v, xi);
}

KrylovBasis rational_arnoldi(const SpdOperator& a, std::span<const double> v, const poles::PoleSet& poles) {
  return rational_impl(KrylovMethod::RationalJacobi, a, v, poles.xi);
}

double shift_invert_pole(const SpectralBounds& bounds) {
  return std::sqrt(bounds.lambda_min * bounds.lambda_max);
}

KrylovBasis shift_invert_basis(const SpdOperator& a, std::span<const double> v, std::size_t k) {
  if (k == 0) throw DomainError("Krylov basis: dimension k must be >= 1");
  const Vector xi(k, shift_invert_pole(a.bounds()));
  return rational_impl(KrylovMethod::ShiftInvert, a, v, xi);
}

KrylovBasis polynomial_krylov_basis(const SpdOperator& a, std::span<const double> v, std::size_t k) {
  KrylovBasis basis = start_basis(KrylovMethod::Polynomial, a, v, k);
  DenseMatrix h(k, k == 0 ? 0 : k - 1);
  std::size_t columns = 0;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    Vector w = a.apply(basis.v[j]);
    ++basis.matvecs;
    auto gs = linalg::modified_gram_schmidt_step(basis.v, std::move(w));
    for (std::size_t i = 0; i <= j; ++i) h(i, j) = gs.h[i];
    if (gs.breakdown()) {
      basis.invariant = true;
      break;
    }
    h(j + 1, j) = gs.h_next;
    columns = j + 1;
    basis.v.push_back(std::move(*gs.v_next));
  }
  basis.h = trim(h, columns + 1, columns);
  return basis;
}

KrylovBasis extended_krylov_basis(const SpdOperator& a, std::span<const double> v, std::size_t k) {
  KrylovBasis basis = start_basis(KrylovMethod::Extended, a, v, k);
  std::size_t last_inverse = 0;
  std::size_t last_positive = 0;
  while (basis.v.size() < k) {
    // Basis positions 2, 4, ... (1-based) come from A^{-1}, 3, 5, ... from A.
    const bool inverse_step = basis.v.size() % 2 == 1;
    Vector w;
    if (inverse_step) {
      w = a.solve_shifted(0.0, basis.v[last_inverse]);
      ++basis.solves;
    } else {
      w = a.apply(basis.v[last_positive]);
      ++basis.matvecs;
    }
    auto gs = linalg::modified_gram_schmidt_step(basis.v, std::move(w));
    if (gs.breakdown()) {
      basis.invariant = true;
      break;
    }
    basis.v.push_back(std::move(*gs.v_next));
    (inverse_step ? last_inverse : last_positive) = basis.v.size() - 1;
  }
  return basis;
}

namespace {

struct ClosedForm {
  DenseMatrix value;
  DenseMatrix hinv;
};

std::optional<ClosedForm> truncated_closed_form(const KrylovBasis& basis) {
  if (basis.method != KrylovMethod::RationalJacobi && basis.method != KrylovMethod::ShiftInvert)
    return std::nullopt;
  const std::size_t m = basis.dim();
  if (basis.h.cols() != m || basis.shifts.size() != m) return std::nullopt;
  DenseMatrix hm(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) hm(i, j) = basis.h(i, j);
  auto hinv = linalg::inverse(hm);
  if (!hinv) return std::nullopt;
  DenseMatrix left = DenseMatrix::identity(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) left(i, j) -= hm(i, j) * basis.shifts[j];
  return ClosedForm{left * *hinv, std::move(*hinv)};
}

// Subtracts h_{m+1,m} (V^T A v_{m+1}) e_m^T H_m^{-1} in place.
void add_residual_term(const KrylovBasis& basis, const SpdOperator& a, ClosedForm& cf) {
  const std::size_t m = basis.dim();
  if (basis.v_next.empty()) return;
  const double h_last = basis.h(m, m - 1);
  const Vector av = a.apply(basis.v_next);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = h_last * linalg::dot(basis.v[i], av);
    for (std::size_t j = 0; j < m; ++j) cf.value(i, j) -= r * cf.hinv(m - 1, j);
  }
}

}  // namespace

std::optional<DenseMatrix> closed_form_projection(const KrylovBasis& basis) {
  auto cf = truncated_closed_form(basis);
  if (!cf) return std::nullopt;
  return std::move(cf->value);
}

std::optional<DenseMatrix> closed_form_projection(const KrylovBasis& basis, const SpdOperator& a) {
  auto cf = truncated_closed_form(basis);
  if (!cf) return std::nullopt;
  add_residual_term(basis, a, *cf);
  return std::move(cf->value);
}

ProjectedMatrix projected_matrix(const KrylovBasis& basis, const SpdOperator& a) {
  const std::size_t m = basis.dim();
  std::vector<Vector> av;
  av.reserve(m);
  for (const auto& col : basis.v) av.push_back(a.apply(col));

  ProjectedMatrix out;
  out.s = DenseMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double sij = 0.5 * (linalg::dot(basis.v[i], av[j]) + linalg::dot(basis.v[j], av[i]));
      out.s(i, j) = sij;
      out.s(j, i) = sij;
    }

  if (basis.method == KrylovMethod::RationalJacobi || basis.method == KrylovMethod::ShiftInvert) {
    auto closed = truncated_closed_form(basis);
    if (!closed) {
      out.cross_check = ProjectedMatrix::CrossCheck::SkippedSingular;
    } else {
      const double scale = out.s.max_abs();
      auto relative = [&](const DenseMatrix& c) { return scale > 0.0 ? (out.s - c).max_abs() / scale : 0.0; };
      out.closed_form_discrepancy = relative(closed->value);
      add_residual_term(basis, a, *closed);
      out.full_identity_discrepancy = relative(closed->value);
      out.cross_check = out.closed_form_discrepancy <= 1e-8 ? ProjectedMatrix::CrossCheck::Passed
                                                            : ProjectedMatrix::CrossCheck::Failed;
    }
  }
  return out;
}

MatrixFunctionResult evaluate_on_basis(const KrylovBasis& basis, const SpdOperator& a,
                                       const TargetFunction& target) {
  const auto projected = projected_matrix(basis, a);
  const auto eig = linalg::dense_sym_eigen(projected.s);
  const auto bounds = a.bounds();
  const double lo = bounds.lambda_min * (1.0 - 1e-8);
  const double hi = bounds.lambda_max * (1.0 + 1e-8);
  for (double lambda : eig.eigenvalues)
    if (!(lambda >= lo && lambda <= hi)) throw SpectralLeak(lambda, bounds.lambda_min, bounds.lambda_max);

  const std::size_t m = basis.dim();
  Vector fq(m);
  for (std::size_t j = 0; j < m; ++j) fq[j] = target(eig.eigenvalues[j]) * eig.eigenvectors(0, j);
  Vector y(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += eig.eigenvectors(i, j) * fq[j];
    y[i] = basis.beta * s;
  }

  MatrixFunctionResult out;
  out.value.assign(a.order(), 0.0);
  for (std::size_t i = 0; i < m; ++i) linalg::axpy(y[i], basis.v[i], out.value);
  out.dim = m;
  out.invariant = basis.invariant;
  out.solves = basis.solves;
  return out;
}

MatrixFunctionApplier::MatrixFunctionApplier(TargetFunction target, KrylovMethod method, std::size_t k,
                                             KrylovOptions options)
    : target_(target), method_(method), k_(k), options_(options) {
  target_.validate();
  if (k_ == 0) throw DomainError("apply_matrix_function: k must be >= 1");
}

const poles::PoleSet& MatrixFunctionApplier::pole_set(const SpdOperator& a) const {
  const auto bounds = a.bounds();
  std::lock_guard lock(mutex_);
  if (!poles_ || poles_->first.lambda_min != bounds.lambda_min ||
      poles_->first.lambda_max != bounds.lambda_max) {
    auto set = std::make_shared<const poles::PoleSet>(
        poles::make_pole_set(target_, k_, bounds.lambda_min, bounds.lambda_max, options_.tau));
    poles_.emplace(bounds, std::move(set));
  }
  return *poles_->second;
}

MatrixFunctionResult MatrixFunctionApplier::apply(const SpdOperator& a, std::span<const double> v) const {
  KrylovBasis basis;
  switch (method_) {
    case KrylovMethod::RationalJacobi:
      basis = rational_arnoldi(a, v, pole_set(a));
      break;
    case KrylovMethod::Polynomial:
      basis = polynomial_krylov_basis(a, v, k_);
      break;
    case KrylovMethod::Extended:
      basis = extended_krylov_basis(a, v, k_);
      break;
    case KrylovMethod::ShiftInvert:
      basis = shift_invert_basis(a, v, k_);
      break;
  }
  return evaluate_on_basis(basis, a, target_);
}

Vector apply_matrix_function(const SpdOperator& a, std::span<const double> v, const TargetFunction& target,
                             KrylovMethod method, std::size_t k, const KrylovOptions& options) {
  return MatrixFunctionApplier(target, method, k, options).apply(a, v).value;
}

}  // namespace frakry
