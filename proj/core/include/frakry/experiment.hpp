#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frakry/krylov.hpp"

namespace frakry::experiment {

enum class Kind { Steady1d, Steady2d, Heat2d, AllenCahn2d, Poles, Compare };
enum class RhsKind { Sin, Random };

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

/// Unset optionals take per-experiment defaults (see resolved()).
struct ExperimentConfig {
  Kind experiment = Kind::Steady1d;
  std::optional<double> alpha;
  std::optional<std::size_t> nx;
  std::optional<std::size_t> ny;
  std::optional<std::size_t> nt;
  std::vector<std::size_t> k_list;
  std::vector<KrylovMethod> methods;
  std::optional<double> mu;
  std::optional<double> dt;
  std::optional<double> nu;
  std::optional<double> tau;  // overrides the Lambert-W tau for jacobi
  RhsKind rhs = RhsKind::Random;
  std::uint64_t seed = 1;
  std::size_t repeats = 5;
  std::size_t threads = 1;
  std::string out;  // empty: caller decides

  /// Copy with every default filled in.
  ExperimentConfig resolved() const;
  /// Throws DomainError describing the first invalid field.
  void validate() const;
};

struct ResultRow {
  std::string experiment;
  std::string method;
  double alpha = 0.0;
  std::size_t k = 0;
  std::size_t n = 0;
  double rel_error = 0.0;
  double wall_time_s = 0.0;
  double tau = 0.0;  // NaN when not applicable
  double nu = 0.0;   // NaN when not applicable
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
};

struct PoleRow {
  std::size_t j = 0;  // 1-based
  double xi = 0.0;
  std::string target;
  double alpha = 0.0;
  std::size_t k = 0;
  double nu = 0.0;
  double tau = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<PoleRow> poles;  // poles experiment only
};

/// Sweeps method x k for the configured experiment. Errors are measured
/// against the exact discrete-sine oracle. A failing cell is recorded with an
/// error status and the sweep continues. Does not write files.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

inline constexpr std::string_view kResultsHeader =
    "experiment,method,alpha,k,n,rel_error,wall_time_s,tau,nu,status";
inline constexpr std::string_view kPolesHeader = "j,xi_j,target,alpha,k,nu,tau";

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(std::istream& is);
void write_poles_csv(std::ostream& os, const std::vector<PoleRow>& rows);

/// Fixed-width text table grouped by experiment and method, ascending k.
std::string emit_convergence_table(std::vector<ResultRow> rows);

/// Seeded uniform(-1, 1) vector.
Vector random_vector(std::size_t n, std::uint64_t seed);

/// |reference - approx|_2 / |reference|_2
double relative_error(std::span<const double> reference, std::span<const double> approx);

}  // namespace frakry::experiment
