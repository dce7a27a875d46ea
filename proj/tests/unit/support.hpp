#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "frakry/linalg.hpp"

namespace support {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_err(std::span<const double> ref, std::span<const double> x) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    num += (ref[i] - x[i]) * (ref[i] - x[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

inline std::vector<double> uniform(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Diagonally dominant symmetric band matrix: SPD by Gershgorin.
inline frakry::linalg::BandedSpd random_spd_banded(std::size_t n, std::size_t b, std::mt19937_64& rng) {
  frakry::linalg::BandedSpd m(n, b);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::vector<double> rowsum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 1; d <= std::min(i, b); ++d) {
      const double x = off(rng);
      m.set(i, i - d, x);
      rowsum[i] += std::abs(x);
      rowsum[i - d] += std::abs(x);
    }
  std::uniform_real_distribution<double> margin(0.1, 2.0);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, rowsum[i] + margin(rng));
  return m;
}

inline frakry::linalg::DenseMatrix to_dense(const frakry::linalg::BandedSpd& m) {
  frakry::linalg::DenseMatrix d(m.order(), m.order());
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t j = 0; j < m.order(); ++j) d(i, j) = m.at(i, j);
  return d;
}

// Random SPD Q diag(lambda) Q^T with Q from Gram-Schmidt of a random matrix.
inline frakry::linalg::DenseMatrix random_spd_dense(std::size_t n, std::mt19937_64& rng,
                                                    std::vector<double>* eigenvalues = nullptr,
                                                    std::vector<std::vector<double>>* eigenvectors = nullptr) {
  std::vector<std::vector<double>> q;
  while (q.size() < n) {
    auto w = uniform(n, rng);
    for (const auto& c : q) frakry::linalg::axpy(-frakry::linalg::dot(c, w), c, w);
    for (const auto& c : q) frakry::linalg::axpy(-frakry::linalg::dot(c, w), c, w);
    const double nw = frakry::linalg::norm2(w);
    if (nw < 1e-3) continue;
    for (auto& x : w) x /= nw;
    q.push_back(w);
  }
  std::uniform_real_distribution<double> lam(0.5, 50.0);
  std::vector<double> l(n);
  for (auto& x : l) x = lam(rng);
  frakry::linalg::DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < n; ++p) s += q[p][i] * l[p] * q[p][j];
      a(i, j) = s;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
  if (eigenvalues) *eigenvalues = l;
  if (eigenvectors) *eigenvectors = q;
  return a;
}

}  // namespace support
