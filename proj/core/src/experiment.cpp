#include "frakry/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "frakry/discretize.hpp"
#include "frakry/errors.hpp"
#include "frakry/solvers.hpp"

namespace frakry::experiment {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<KrylovMethod> kAllMethods = {KrylovMethod::RationalJacobi, KrylovMethod::Polynomial,
                                               KrylovMethod::Extended, KrylovMethod::ShiftInvert};

// One sweep cell: computes the approximation and returns (error, tau, nu).
struct CellOutcome {
  double rel_error = kNaN;
  double tau = kNaN;
  double nu = kNaN;
};

using CellFn = std::function<CellOutcome()>;

std::string error_tag(const std::exception& e) {
  if (dynamic_cast<const SpectralLeak*>(&e)) return "error:spectral_leak";
  if (dynamic_cast<const NotSpd*>(&e)) return "error:not_spd";
  if (dynamic_cast<const NotFractional*>(&e)) return "error:not_fractional";
  if (dynamic_cast<const NonConvergence*>(&e)) return "error:non_convergence";
  if (dynamic_cast<const InternalConsistency*>(&e)) return "error:internal_consistency";
  if (dynamic_cast<const DomainError*>(&e)) return "error:domain";
  return "error:other";
}

std::string format_double(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

double parse_double(const std::string& field) {
  if (field.empty()) return kNaN;
  return std::stod(field);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double jacobi_tau(const MatrixFunctionApplier& applier, const SpdOperator& a) {
  return applier.method() == KrylovMethod::RationalJacobi && applier.target().is_fractional()
             ? applier.pole_set(a).tau.tau
             : kNaN;
}

double reported_tau(const MatrixFunctionApplier& applier, const SpdOperator& a) {
  if (applier.method() == KrylovMethod::ShiftInvert) return shift_invert_pole(a.bounds());
  return jacobi_tau(applier, a);
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::Steady1d:
      return "steady1d";
    case Kind::Steady2d:
      return "steady2d";
    case Kind::Heat2d:
      return "heat2d";
    case Kind::AllenCahn2d:
      return "allencahn2d";
    case Kind::Poles:
      return "poles";
    case Kind::Compare:
      return "compare";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (auto k : {Kind::Steady1d, Kind::Steady2d, Kind::Heat2d, Kind::AllenCahn2d, Kind::Poles, Kind::Compare})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  switch (experiment) {
    case Kind::Steady1d:
    case Kind::Compare:
    case Kind::Poles:
      c.alpha = alpha.value_or(1.2);
      c.nx = nx.value_or(4096);
      c.ny = ny.value_or(1);
      break;
    case Kind::Steady2d:
      c.alpha = alpha.value_or(1.5);
      c.nx = nx.value_or(64);
      c.ny = ny.value_or(*c.nx);
      break;
    case Kind::Heat2d:
      c.alpha = alpha.value_or(1.2);
      c.nx = nx.value_or(64);
      c.ny = ny.value_or(*c.nx);
      c.nt = nt.value_or(64);
      c.mu = mu.value_or(1.0);
      c.dt = dt.value_or(1.0 / static_cast<double>(*c.nt));
      break;
    case Kind::AllenCahn2d:
      c.alpha = alpha.value_or(1.5);
      c.nx = nx.value_or(80);
      c.ny = ny.value_or(*c.nx);
      c.dt = dt.value_or(1e-2);
      c.nt = nt.value_or(400);
      c.mu = mu.value_or(1e-3);
      break;
  }
  if (c.experiment == Kind::Poles) {
    if (c.k_list.empty()) c.k_list = {10, 20, 30};
    if (!c.nu) c.nu = 1.0 / static_cast<double>(*c.nx + 1);
  }
  if (c.k_list.empty()) c.k_list = {5, 10, 15, 20, 25, 30};
  if (c.methods.empty()) c.methods = kAllMethods;
  if (c.experiment == Kind::Compare) c.rhs = RhsKind::Random;
  return c;
}

void ExperimentConfig::validate() const {
  const ExperimentConfig c = resolved();
  if (!(*c.alpha > 1.0 && *c.alpha <= 2.0)) throw DomainError("--alpha must lie in (1, 2]");
  if (*c.nx < 1 || *c.ny < 1) throw DomainError("--nx/--ny must be >= 1");
  for (std::size_t k : c.k_list)
    if (k < 1) throw DomainError("--k entries must be >= 1");
  if (c.nt && *c.nt < 1) throw DomainError("--nt must be >= 1");
  if (c.mu && !(*c.mu > 0.0)) throw DomainError("--mu must be > 0");
  if (c.dt && !(*c.dt > 0.0)) throw DomainError("--dt must be > 0");
  if (c.nu && !(*c.nu > 0.0)) throw DomainError("--nu must be > 0");
  if (c.tau && !(*c.tau > 0.0)) throw DomainError("--tau must be > 0");
  if (c.experiment == Kind::Poles && *c.alpha == 2.0) throw DomainError("poles: alpha must be < 2");
}

Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

double relative_error(std::span<const double> reference, std::span<const double> approx) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - approx[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  return std::sqrt(num) / std::sqrt(den);
}

ExperimentResult run_experiment(const ExperimentConfig& input) {
  input.validate();
  const ExperimentConfig cfg = input.resolved();
  const double alpha = *cfg.alpha;
  ExperimentResult result;

  if (cfg.experiment == Kind::Poles) {
    const auto grid = discretize::GridProblem::line(*cfg.nx, alpha);
    const discretize::FdLaplacian a(grid);
    const auto b = a.bounds();
    for (std::size_t k : cfg.k_list) {
      for (const auto& target :
           {TargetFunction::frac_resolvent(alpha, *cfg.nu), TargetFunction::inverse_frac_power(alpha)}) {
        const auto set = poles::make_pole_set(target, k, b.lambda_min, b.lambda_max, cfg.tau);
        for (std::size_t j = 0; j < set.xi.size(); ++j)
          result.poles.push_back({j + 1, set.xi[j], std::string(to_string(target.kind)), alpha, k,
                                  target.kind == TargetFunction::Kind::FracResolvent ? target.nu : kNaN,
                                  set.tau.tau});
      }
    }
    return result;
  }

  const bool one_d = cfg.experiment == Kind::Steady1d || cfg.experiment == Kind::Compare;
  const auto grid = one_d ? discretize::GridProblem::line(*cfg.nx, alpha)
                          : discretize::GridProblem::square(*cfg.nx, *cfg.ny, alpha);
  const discretize::FdLaplacian a(grid);
  const KrylovOptions options{cfg.tau};

  // Per-experiment input and reference that do not depend on (method, k).
  Vector input_vector;
  Vector reference;
  std::optional<solvers::SteppingScheme> scheme;
  switch (cfg.experiment) {
    case Kind::Steady1d:
    case Kind::Compare:
    case Kind::Steady2d: {
      if (cfg.rhs == RhsKind::Sin)
        input_vector = discretize::sample_rhs(grid, one_d ? discretize::RhsExpr::Sin1D : discretize::RhsExpr::Sin2D);
      else
        input_vector = random_vector(grid.size(), cfg.seed);
      reference = discretize::spectral_oracle_apply(grid, TargetFunction::inverse_frac_power(alpha), input_vector);
      break;
    }
    case Kind::Heat2d: {
      scheme = solvers::SteppingScheme::backward_euler(*cfg.mu, *cfg.dt);
      input_vector = discretize::sample_rhs(grid, discretize::RhsExpr::PolyBump2D);
      reference = discretize::spectral_oracle_apply(grid, TargetFunction::frac_resolvent(alpha, scheme->nu()),
                                                    input_vector);
      break;
    }
    case Kind::AllenCahn2d: {
      scheme = solvers::SteppingScheme::imex_backward_euler(*cfg.mu, *cfg.dt);
      input_vector = discretize::sample_rhs(grid, discretize::RhsExpr::AllenCahnInit2D);
      break;
    }
    case Kind::Poles:
      break;
  }

  struct Cell {
    KrylovMethod method;
    std::size_t k;
    CellFn run;
  };
  std::vector<Cell> cells;
  for (KrylovMethod method : cfg.methods)
    for (std::size_t k : cfg.k_list) {
      CellFn run;
      switch (cfg.experiment) {
        case Kind::Steady1d:
        case Kind::Compare:
        case Kind::Steady2d:
          run = [&, method, k] {
            const MatrixFunctionApplier applier(TargetFunction::inverse_frac_power(alpha), method, k, options);
            const auto u = applier.apply(a, input_vector).value;
            return CellOutcome{relative_error(reference, u), reported_tau(applier, a), kNaN};
          };
          break;
        case Kind::Heat2d:
          run = [&, method, k] {
            const solvers::Stepper stepper(a, *scheme, method, k, options);
            const auto u = stepper.step_linear(input_vector, {});
            const MatrixFunctionApplier probe(stepper.target(), method, k, options);
            const double tau = stepper.target().is_fractional() ? reported_tau(probe, a) : kNaN;
            return CellOutcome{relative_error(reference, u), tau, scheme->nu()};
          };
          break;
        case Kind::AllenCahn2d:
          run = [&, method, k] {
            const solvers::Stepper stepper(a, *scheme, method, k, options);
            Vector u = input_vector;
            double worst = 0.0;
            for (std::size_t m = 0; m < *cfg.nt; ++m) {
              Vector rhs = u;
              linalg::axpy(scheme->dt, solvers::allen_cahn_reaction(u), rhs);
              const Vector exact = discretize::spectral_oracle_apply(grid, stepper.target(), rhs);
              u = stepper.apply_resolvent(rhs);
              worst = std::max(worst, relative_error(exact, u));
            }
            const MatrixFunctionApplier probe(stepper.target(), method, k, options);
            const double tau = stepper.target().is_fractional() ? reported_tau(probe, a) : kNaN;
            return CellOutcome{worst, tau, scheme->nu()};
          };
          break;
        case Kind::Poles:
          break;
      }
      cells.push_back({method, k, std::move(run)});
    }

  result.rows.resize(cells.size());
  auto timed_run = [&](std::size_t i) {
    ResultRow& row = result.rows[i];
    row.experiment = std::string(to_string(cfg.experiment));
    row.method = std::string(to_string(cells[i].method));
    row.alpha = alpha;
    row.k = cells[i].k;
    row.n = grid.size();
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto outcome = cells[i].run();
      row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.rel_error = outcome.rel_error;
      row.tau = outcome.tau;
      row.nu = outcome.nu;
      row.status = "ok";
    } catch (const std::exception& e) {
      row.rel_error = kNaN;
      row.wall_time_s = kNaN;
      row.tau = kNaN;
      row.nu = kNaN;
      row.status = error_tag(e);
    }
  };

  // Accuracy pass, optionally parallel.
  const std::size_t width = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(cells.size(), 1));
  if (width == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) timed_run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < width; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) timed_run(i);
      });
  }

  // Timing pass, always sequential. With a single worker the accuracy pass
  // already provides the first sample.
  if (cfg.repeats > 0) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      ResultRow& row = result.rows[i];
      if (!row.ok()) continue;
      double total = width == 1 ? row.wall_time_s : 0.0;
      const std::size_t extra = width == 1 ? cfg.repeats - 1 : cfg.repeats;
      for (std::size_t r = 0; r < extra; ++r) {
        const auto start = std::chrono::steady_clock::now();
        (void)cells[i].run();
        total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      row.wall_time_s = total / static_cast<double>(cfg.repeats);
    }
  }
  return result;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kResultsHeader << '\n';
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.method << ',' << format_double(r.alpha) << ',' << r.k << ',' << r.n << ','
       << format_double(r.rel_error) << ',' << format_double(r.wall_time_s) << ',' << format_double(r.tau) << ','
       << format_double(r.nu) << ',' << r.status << '\n';
  }
}

std::vector<ResultRow> parse_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("results CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw DomainError("results CSV: unexpected header '" + line + "'");
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10) throw DomainError("results CSV: expected 10 fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.experiment = f[0];
    r.method = f[1];
    r.alpha = parse_double(f[2]);
    r.k = std::stoul(f[3]);
    r.n = std::stoul(f[4]);
    r.rel_error = parse_double(f[5]);
    r.wall_time_s = parse_double(f[6]);
    r.tau = parse_double(f[7]);
    r.nu = parse_double(f[8]);
    r.status = f[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_poles_csv(std::ostream& os, const std::vector<PoleRow>& rows) {
  os << kPolesHeader << '\n';
  for (const auto& r : rows)
    os << r.j << ',' << format_double(r.xi) << ',' << r.target << ',' << format_double(r.alpha) << ',' << r.k
       << ',' << format_double(r.nu) << ',' << format_double(r.tau) << '\n';
}

std::string emit_convergence_table(std::vector<ResultRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& x, const ResultRow& y) {
    if (x.experiment != y.experiment) return x.experiment < y.experiment;
    if (x.method != y.method) return x.method < y.method;
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    return x.k < y.k;
  });
  std::ostringstream os;
  os << std::left << std::setw(12) << "experiment" << std::setw(13) << "method" << std::right << std::setw(6)
     << "alpha" << std::setw(5) << "k" << std::setw(9) << "n" << std::setw(14) << "rel_error" << std::setw(13)
     << "time_s" << "  status\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(12) << r.experiment << std::setw(13) << r.method << std::right << std::fixed
       << std::setprecision(2) << std::setw(6) << r.alpha << std::setw(5) << r.k << std::setw(9) << r.n
       << std::scientific << std::setprecision(4) << std::setw(14) << r.rel_error << std::setw(13) << r.wall_time_s
       << "  " << r.status << '\n';
    os.unsetf(std::ios::floatfield);
  }
  return os.str();
}

}  // namespace frakry::experiment
