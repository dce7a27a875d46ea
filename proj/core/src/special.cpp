#include "frakry/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "frakry/errors.hpp"

namespace frakry::special {

double lambert_w(double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("lambert_w: argument must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = std::log1p(x);
  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(w)))
      break;
  }
  return w;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be > 0");
  // Lanczos coefficients for g = 7, n = 9.
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps accuracy near zero.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  double sum = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) sum += c[i] / (xm1 + static_cast<double>(i));
  const double t = xm1 + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(sum);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double log_binomial(double x, double m) {
  return log_gamma(x + 1.0) - log_gamma(m + 1.0) - log_gamma(x - m + 1.0);
}

void validate(const JacobiParams& p) {
  if (!(p.a > -1.0) || !(p.b > -1.0) || !std::isfinite(p.a) || !std::isfinite(p.b))
    throw DomainError("Jacobi parameters must satisfy a > -1 and b > -1 (got a=" +
                      std::to_string(p.a) + ", b=" + std::to_string(p.b) + ")");
}

double jacobi_weight_mass(const JacobiParams& p) {
  validate(p);
  return std::exp((p.a + p.b + 1.0) * std::numbers::ln2 + log_beta(p.a + 1.0, p.b + 1.0));
}

QuadratureRule gauss_jacobi(std::size_t k, const JacobiParams& p) {
  validate(p);
  if (k == 0) throw DomainError("gauss_jacobi: need at least one node");
  const double a = p.a;
  const double b = p.b;
  const double ab = a + b;

  // Jacobi matrix of the monic three-term recurrence. The j = 0 diagonal and
  // j = 1 off-diagonal entries are written in cancelled form, since the
  // generic expressions are 0/0 when a + b is 0 or -1.
  linalg::SymTridiagonal t;
  t.diag.resize(k);
  t.offdiag.resize(k - 1);
  t.diag[0] = (b - a) / (ab + 2.0);
  for (std::size_t j = 1; j < k; ++j) {
    const double s = 2.0 * static_cast<double>(j) + ab;
    t.diag[j] = (b * b - a * a) / (s * (s + 2.0));
  }
  if (k > 1) t.offdiag[0] = std::sqrt(4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
  for (std::size_t j = 2; j < k; ++j) {
    const double jd = static_cast<double>(j);
    const double s = 2.0 * jd + ab;
    const double num = 4.0 * jd * (jd + a) * (jd + b) * (jd + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    t.offdiag[j - 1] = std::sqrt(num / den);
  }

  auto eig = linalg::sym_tridiag_eigen(t, true);
  const double mass = jacobi_weight_mass(p);
  QuadratureRule rule;
  rule.nodes = std::move(eig.eigenvalues);
  rule.weights.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double v = (*eig.first_components)[j];
    rule.weights[j] = mass * v * v;
  }
  return rule;
}

Vector jacobi_zeros(std::size_t m, const JacobiParams& p) {
  validate(p);
  if (m == 0) return {};
  return gauss_jacobi(m, p).nodes;
}

}  // namespace frakry::special
