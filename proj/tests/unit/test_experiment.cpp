#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "frakry/errors.hpp"
#include "frakry/experiment.hpp"

using namespace frakry;
using namespace frakry::experiment;

namespace {

ResultRow row(std::string method, std::size_t k, double err) {
  ResultRow r;
  r.experiment = "steady1d";
  r.method = std::move(method);
  r.alpha = 1.2;
  r.k = k;
  r.n = 64;
  r.rel_error = err;
  r.wall_time_s = 1e-3 * k;
  r.tau = 0.1 + k;
  r.nu = std::nan("");
  return r;
}

}  // namespace

TEST_CASE("experiment names") {
  for (auto k : {Kind::Steady1d, Kind::Steady2d, Kind::Heat2d, Kind::AllenCahn2d, Kind::Poles, Kind::Compare})
    CHECK(parse_kind(to_string(k)) == k);
  CHECK_FALSE(parse_kind("steady3d").has_value());
}

TEST_CASE("configuration defaults and validation") {
  ExperimentConfig cfg;
  cfg.experiment = Kind::AllenCahn2d;
  auto r = cfg.resolved();
  CHECK(*r.nx == 80);
  CHECK(*r.ny == 80);
  CHECK(*r.dt == 1e-2);
  CHECK(*r.mu == 1e-3);
  CHECK(*r.nt == 400);
  CHECK(r.methods.size() == 4);

  ExperimentConfig bad;
  bad.alpha = 2.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  ExperimentConfig zero_k;
  zero_k.k_list = {0};
  CHECK_THROWS_AS(zero_k.validate(), DomainError);
}

TEST_CASE("results CSV round trips bit for bit") {
  std::vector<ResultRow> rows{row("jacobi", 5, 1.0 / 3.0), row("poly", 10, 2.718281828459045e-7)};
  rows[1].status = "error:SpectralLeak";
  rows[1].wall_time_s = std::nan("");
  std::stringstream ss;
  write_results_csv(ss, rows);
  std::string header;
  std::getline(ss, header);
  CHECK(header == kResultsHeader);
  ss.seekg(0);
  auto back = parse_results_csv(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].method == rows[i].method);
    CHECK(back[i].k == rows[i].k);
    CHECK(back[i].rel_error == rows[i].rel_error);
    CHECK(back[i].tau == rows[i].tau);
    CHECK(std::isnan(back[i].nu));
    CHECK(back[i].status == rows[i].status);
  }
  CHECK(std::isnan(back[1].wall_time_s));
}

TEST_CASE("convergence table") {
  const std::string empty = emit_convergence_table({});
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
  const std::string one = emit_convergence_table({row("poly", 5, 0.5)});
  CHECK(std::count(one.begin(), one.end(), '\n') == 2);

  std::vector<ResultRow> rows;
  const char* methods[] = {"shiftinvert", "poly", "jacobi", "extended"};
  for (std::size_t k : {30u, 5u, 20u, 10u, 15u})
    for (const char* m : methods) rows.push_back(row(m, k, 1.0 / k));
  auto sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.method, a.k) < std::tie(b.method, b.k);
  });
  const std::string table = emit_convergence_table(rows);
  std::istringstream lines(table);
  std::string line;
  std::getline(lines, line);  // header
  for (const auto& expect : sorted) {
    REQUIRE(std::getline(lines, line));
    std::istringstream fields(line);
    std::string experiment, method;
    double alpha = 0.0;
    std::size_t k = 0;
    fields >> experiment >> method >> alpha >> k;
    CHECK(method == expect.method);
    CHECK(k == expect.k);
  }
}

TEST_CASE("sweeps are reproducible and record errors") {
  ExperimentConfig cfg;
  cfg.experiment = Kind::Steady1d;
  cfg.nx = 256;
  cfg.k_list = {1, 5, 10};
  cfg.repeats = 1;
  cfg.seed = 42;
  auto a = run_experiment(cfg);
  cfg.threads = 3;
  auto b = run_experiment(cfg);
  REQUIRE(a.rows.size() == 12);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].ok());
    CHECK(a.rows[i].rel_error == b.rows[i].rel_error);
    CHECK(a.rows[i].n == 256);
  }

  cfg.rhs = RhsKind::Sin;
  cfg.nx = 64;
  cfg.k_list = {1};
  for (const auto& r : run_experiment(cfg).rows) CHECK(r.rel_error <= 1e-12);
}

TEST_CASE("poles experiment emits k rows per target") {
  ExperimentConfig cfg;
  cfg.experiment = Kind::Poles;
  cfg.nx = 4096;
  auto res = run_experiment(cfg);
  CHECK(res.poles.size() == 2 * (10 + 20 + 30));
  for (const auto& p : res.poles) CHECK(p.xi > 0.0);
  std::ostringstream os;
  write_poles_csv(os, res.poles);
  CHECK(os.str().rfind(std::string(kPolesHeader), 0) == 0);
}

TEST_CASE("random vectors are seeded") {
  CHECK(random_vector(10, 3) == random_vector(10, 3));
  CHECK(random_vector(10, 3) != random_vector(10, 4));
  const Vector ref{3, 4};
  CHECK(relative_error(ref, Vector{3, 4}) == 0.0);
  CHECK(relative_error(ref, Vector{0, 0}) == 1.0);
}
