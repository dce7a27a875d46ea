#include <benchmark/benchmark.h>

#include "frakry/discretize.hpp"
#include "frakry/experiment.hpp"
#include "frakry/krylov.hpp"
#include "frakry/poles.hpp"
#include "frakry/special.hpp"

using namespace frakry;

namespace {

const discretize::FdLaplacian& line4096() {
  static const discretize::FdLaplacian a(discretize::GridProblem::line(4096, 1.2));
  return a;
}

const discretize::FdLaplacian& square64() {
  static const discretize::FdLaplacian a(discretize::GridProblem::square(64, 64, 1.5));
  return a;
}

void BM_GaussJacobi(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(special::gauss_jacobi(k, {-0.6, -0.4}));
}
BENCHMARK(BM_GaussJacobi)->Arg(10)->Arg(40);

void BM_PoleSetInverse(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto b = line4096().bounds();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        poles::make_pole_set(TargetFunction::inverse_frac_power(1.2), k, b.lambda_min, b.lambda_max));
}
BENCHMARK(BM_PoleSetInverse)->Arg(10)->Arg(30);

void BM_PoleSetResolvent(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto b = line4096().bounds();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        poles::make_pole_set(TargetFunction::frac_resolvent(1.2, 1.0 / 4097), k, b.lambda_min, b.lambda_max));
}
BENCHMARK(BM_PoleSetResolvent)->Arg(10)->Arg(30);

void BM_ApplyLine(benchmark::State& state) {
  const auto method = static_cast<KrylovMethod>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto& a = line4096();
  const auto v = experiment::random_vector(a.order(), 1);
  const MatrixFunctionApplier applier(TargetFunction::inverse_frac_power(1.2), method, k);
  for (auto _ : state) benchmark::DoNotOptimize(applier.apply(a, v));
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_ApplyLine)->ArgsProduct({{0, 1, 2, 3}, {10, 30}})->Unit(benchmark::kMillisecond);

void BM_ApplySquareResolvent(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto& a = square64();
  const auto v = discretize::sample_rhs(a.grid(), discretize::RhsExpr::PolyBump2D);
  const MatrixFunctionApplier applier(TargetFunction::frac_resolvent(1.5, 1.0 / 64), KrylovMethod::RationalJacobi, k);
  for (auto _ : state) benchmark::DoNotOptimize(applier.apply(a, v));
}
BENCHMARK(BM_ApplySquareResolvent)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SpectralOracle(benchmark::State& state) {
  const auto& a = square64();
  const auto v = experiment::random_vector(a.order(), 2);
  const auto f = TargetFunction::inverse_frac_power(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(discretize::spectral_oracle_apply(a.grid(), f, v));
}
BENCHMARK(BM_SpectralOracle)->Unit(benchmark::kMillisecond);

void BM_BandedCholeskyFactor(benchmark::State& state) {
  const auto shifted = square64().banded().shifted(10.0);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::BandedCholesky(shifted));
}
BENCHMARK(BM_BandedCholeskyFactor)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
