#include "frakry/poles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "frakry/errors.hpp"
#include "frakry/special.hpp"

namespace frakry {

TargetFunction TargetFunction::inverse_frac_power(double alpha) {
  TargetFunction t{Kind::InverseFracPower, alpha, 0.0};
  t.validate();
  return t;
}

TargetFunction TargetFunction::frac_resolvent(double alpha, double nu) {
  TargetFunction t{Kind::FracResolvent, alpha, nu};
  t.validate();
  return t;
}

void TargetFunction::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("target function: alpha must lie in (0, 2], got " + std::to_string(alpha));
  if (kind == Kind::FracResolvent && !(nu > 0.0 && std::isfinite(nu)))
    throw DomainError("target function: nu must be positive, got " + std::to_string(nu));
}

double TargetFunction::operator()(double z) const {
  switch (kind) {
    case Kind::InverseFracPower:
      return std::pow(z, -0.5 * alpha);
    case Kind::FracResolvent:
      return 1.0 / (1.0 + nu * std::pow(z, 0.5 * alpha));
  }
  return 0.0;
}

std::string_view to_string(TargetFunction::Kind kind) {
  switch (kind) {
    case TargetFunction::Kind::InverseFracPower:
      return "inverse_frac_power";
    case TargetFunction::Kind::FracResolvent:
      return "frac_resolvent";
  }
  return "unknown";
}

namespace poles {

namespace {

void require_fractional_order(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError(std::string(where) + ": alpha must lie in (0, 2), got " + std::to_string(alpha));
}

SignedLog signed_log_product(double scale_log, const Vector& roots, double x) {
  SignedLog out{1, scale_log};
  for (double r : roots) {
    const double f = r - x;
    if (f == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    if (f < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(f));
  }
  return out;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// g(x) and g'(x) scaled by a common positive factor; g(x) = p(-x) + nu q(-x).
struct ScaledValue {
  double g;
  double dg;
};

ScaledValue scaled_value_and_derivative(const FracPowerRational& r, double nu, double x) {
  const SignedLog p = signed_log_product(std::log(r.chi), r.eps, x);
  const SignedLog q = signed_log_product(std::log(nu), r.eta, x);
  const double m = std::max(p.log_abs, q.log_abs);
  const double ps = p.sign == 0 ? 0.0 : p.sign * std::exp(p.log_abs - m);
  const double qs = q.sign == 0 ? 0.0 : q.sign * std::exp(q.log_abs - m);
  double dp = 0.0, dq = 0.0;
  for (double e : r.eps) dp += 1.0 / (e - x);
  for (double e : r.eta) dq += 1.0 / (e - x);
  return {ps + qs, -ps * dp - qs * dq};
}

}  // namespace

TauSelection select_tau(double alpha, std::size_t k, double lambda_min, double lambda_max) {
  require_fractional_order(alpha, "select_tau");
  if (k == 0) throw DomainError("select_tau: k must be >= 1");
  if (!(lambda_min > 0.0) || !(lambda_min <= lambda_max) || !std::isfinite(lambda_max))
    throw DomainError("select_tau: need 0 < lambda_min <= lambda_max");

  const double half = 0.5 * alpha;
  const double kd = static_cast<double>(k);
  const double ratio = lambda_max / lambda_min;
  const double log_ratio = std::log(ratio);

  TauSelection sel;
  sel.lambda_min = lambda_min;
  sel.lambda_max = lambda_max;
  sel.k = k;
  sel.k_bar = half * half / 8.0 * std::sqrt(ratio) * (log_ratio + 2.0);
  const double w = special::lambert_w(4.0 * kd * kd * std::numbers::e / (half * half));
  const double scale = alpha / (4.0 * kd * std::numbers::e);
  sel.tau_tilde = lambda_min * scale * scale * std::exp(2.0 * w);
  sel.sigma_tilde = -half / (8.0 * kd) * log_ratio * std::sqrt(lambda_max);
  if (kd <= sel.k_bar) {
    sel.tau = sel.tau_tilde;
  } else {
    const double s = sel.sigma_tilde;
    const double root = s + std::sqrt(s * s + std::sqrt(lambda_min * lambda_max));
    sel.tau = root * root;
  }
  return sel;
}

bool FracPowerRational::interlaces() const {
  if (eta.size() != k || eps.size() + 1 != k || !(chi > 0.0)) return false;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    if (!(eta[j] > eps[j]) || !(eps[j] > eta[j + 1])) return false;
  }
  return eta.back() > 0.0;
}

FracPowerRational build_frac_power_rational(double alpha, std::size_t k, double tau) {
  require_fractional_order(alpha, "build_frac_power_rational");
  if (k == 0) throw DomainError("build_frac_power_rational: k must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("build_frac_power_rational: tau must be > 0");

  const double half = 0.5 * alpha;
  FracPowerRational r;
  r.alpha = alpha;
  r.k = k;
  r.tau = tau;

  auto rule = special::gauss_jacobi(k, {-half, half - 1.0});
  r.theta = std::move(rule.nodes);
  r.omega = std::move(rule.weights);
  r.zeta = special::jacobi_zeros(k - 1, {half, 1.0 - half});

  r.eta.resize(k);
  for (std::size_t j = 0; j < k; ++j) r.eta[j] = tau * (1.0 - r.theta[j]) / (1.0 + r.theta[j]);
  r.eps.resize(k - 1);
  for (std::size_t j = 0; j + 1 < k; ++j) r.eps[j] = tau * (1.0 - r.zeta[j]) / (1.0 + r.zeta[j]);

  const double kd = static_cast<double>(k);
  double log_chi = std::log(r.eta[k - 1]) - half * std::log(tau) +
                   special::log_binomial(kd + half - 1.0, kd - 1.0) -
                   special::log_binomial(kd - half, kd);
  for (std::size_t j = 0; j + 1 < k; ++j) log_chi += std::log(r.eta[j]) - std::log(r.eps[j]);
  r.chi = std::exp(log_chi);

  if (!r.interlaces()) {
    std::ostringstream os;
    os.precision(17);
    os << "build_frac_power_rational: interlacing violated for alpha=" << alpha << ", k=" << k
       << ", tau=" << tau;
    throw InternalConsistency(os.str());
  }
  return r;
}

double evaluate_rational(const FracPowerRational& r, double z) {
  if (!(z >= 0.0)) throw DomainError("evaluate_rational: z must be >= 0");
  double log_value = std::log(r.chi);
  for (double e : r.eps) log_value += std::log(z + e);
  for (double e : r.eta) log_value -= std::log(z + e);
  return std::exp(log_value);
}

double evaluate_rational_partial_fractions(const FracPowerRational& r, double z) {
  if (!(z >= 0.0)) throw DomainError("evaluate_rational: z must be >= 0");
  const double half = 0.5 * r.alpha;
  const double scale = 2.0 * std::sin(half * std::numbers::pi) * std::pow(r.tau, 1.0 - half) /
                       std::numbers::pi;
  double sum = 0.0;
  for (std::size_t j = 0; j < r.k; ++j) sum += r.omega[j] / (1.0 + r.theta[j]) / (r.eta[j] + z);
  return scale * sum;
}

SignedLog resolvent_denominator_at(const FracPowerRational& r, double nu, double x) {
  const SignedLog p = signed_log_product(std::log(r.chi), r.eps, x);
  const SignedLog q = signed_log_product(std::log(nu), r.eta, x);
  if (p.sign == 0) return q;
  if (q.sign == 0) return p;
  const double m = std::max(p.log_abs, q.log_abs);
  const double v = p.sign * std::exp(p.log_abs - m) + q.sign * std::exp(q.log_abs - m);
  if (v == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  return {sign_of(v), m + std::log(std::abs(v))};
}

Vector resolvent_denominator_roots(const FracPowerRational& r, double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("resolvent_denominator_roots: nu must be > 0");
  const std::size_t k = r.k;

  // Sample points in ascending x: eta_k < ... < eta_1 < upper.
  Vector points(r.eta.rbegin(), r.eta.rend());
  const int leading_sign = (k % 2 == 0) ? 1 : -1;
  double upper = 2.0 * r.eta.front();
  for (int doubling = 0; resolvent_denominator_at(r, nu, upper).sign != leading_sign; ++doubling) {
    if (doubling > 2000 || !std::isfinite(upper))
      throw InternalConsistency("resolvent_denominator_roots: no upper bracket found");
    upper *= 2.0;
  }
  points.push_back(upper);

  std::vector<int> signs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) signs[i] = resolvent_denominator_at(r, nu, points[i]).sign;

  std::vector<std::size_t> brackets;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) brackets.push_back(i);

  if (brackets.size() != k) {
    std::ostringstream os;
    os.precision(17);
    os << "resolvent_denominator_roots: expected " << k << " sign changes, found "
       << brackets.size() << " (alpha=" << r.alpha << ", nu=" << nu << "); samples:";
    for (std::size_t i = 0; i < points.size(); ++i) os << " [" << points[i] << ": " << signs[i] << "]";
    throw InternalConsistency(os.str());
  }

  Vector roots;
  roots.reserve(k);
  for (std::size_t i : brackets) {
    double lo = points[i], hi = points[i + 1];
    const int sign_lo = signs[i];
    double root = 0.5 * (lo + hi);
    for (int iter = 0; iter < 400 && (hi - lo) > 1e-14 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const int s = resolvent_denominator_at(r, nu, mid).sign;
      if (s == 0) {
        lo = hi = mid;
        break;
      }
      (s == sign_lo ? lo : hi) = mid;
    }
    root = 0.5 * (lo + hi);
    for (int polish = 0; polish < 2; ++polish) {
      const auto v = scaled_value_and_derivative(r, nu, root);
      if (v.g == 0.0 || v.dg == 0.0 || !std::isfinite(v.dg)) break;
      const double next = root - v.g / v.dg;
      if (!(next >= lo && next <= hi)) break;
      root = next;
    }
    roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

PoleSet make_pole_set(const TargetFunction& target, std::size_t k, double lambda_min,
                      double lambda_max, std::optional<double> tau_override) {
  target.validate();
  if (!target.is_fractional())
    throw NotFractional(
        "make_pole_set: alpha = 2 needs no rational approximation; use the direct resolvent");
  if (k == 0) throw DomainError("make_pole_set: k must be >= 1");

  PoleSet set;
  set.target = target;
  set.tau = select_tau(target.alpha, k, lambda_min, lambda_max);
  if (tau_override) {
    set.tau.tau = *tau_override;
    set.tau.overridden = true;
  }
  set.rational = build_frac_power_rational(target.alpha, k, set.tau.tau);

  if (target.kind == TargetFunction::Kind::InverseFracPower) {
    set.xi.assign(set.rational.eta.rbegin(), set.rational.eta.rend());
  } else {
    set.xi = resolvent_denominator_roots(set.rational, target.nu);
  }

  const double gap = 1e-12 * set.xi.back();
  for (std::size_t j = 0; j < set.xi.size(); ++j) {
    if (!(set.xi[j] > 0.0) || (j > 0 && !(set.xi[j] - set.xi[j - 1] > gap)))
      throw InternalConsistency("make_pole_set: poles are not positive and distinct");
  }
  return set;
}

}  // namespace poles
}  // namespace frakry
