#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "normpar/expr.hpp"
#include "normpar/gateaux.hpp"
#include "normpar/numradius.hpp"
#include "normpar/parallelism.hpp"

using namespace normpar;

namespace {

GridFunction random_grid(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<GridPoint> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) pts.push_back({"x" + std::to_string(k), Complex{nd(rng), nd(rng)}});
  return GridFunction("K", std::move(pts));
}

void BM_ParallelDirect(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = random_grid(rng, n);
  const auto g = random_grid(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(parallel_direct(f, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ParallelDirect)->RangeMultiplier(8)->Range(8, 32768)->Complexity();

void BM_Certify(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto f = random_grid(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(certify(f, f.scaled(Complex{0.0, 2.0})));
}
BENCHMARK(BM_Certify)->Arg(50)->Arg(5000);

void BM_OriginInHull(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<Complex> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {nd(rng), nd(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(origin_in_hull(pts));
}
BENCHMARK(BM_OriginInHull)->RangeMultiplier(10)->Range(10, 100000);

void BM_OriginInHullDual(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::vector<Complex> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {nd(rng), nd(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(origin_in_hull_dual(pts));
}
BENCHMARK(BM_OriginInHullDual)->Arg(10)->Arg(1000);

void BM_DerivativeFd(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto f = random_grid(rng, 1000);
  const auto g = random_grid(rng, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(dplus_fd(f, g));
}
BENCHMARK(BM_DerivativeFd);

void BM_NumericalRadius(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  const auto n = static_cast<std::size_t>(state.range(0));
  Mat a(n, n);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {nd(rng), nd(rng)};
  const BallFunction f({n, PNorm::two, ScalarField::complex}, a);
  for (auto _ : state) benchmark::DoNotOptimize(numerical_radius(f));
}
BENCHMARK(BM_NumericalRadius)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_ParallelToId(benchmark::State& state) {
  Mat rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  const BallFunction f({2, PNorm::two, ScalarField::complex}, rot);
  for (auto _ : state) benchmark::DoNotOptimize(parallel_to_id(f));
}
BENCHMARK(BM_ParallelToId)->Unit(benchmark::kMillisecond);

void BM_ExpressionParse(benchmark::State& state) {
  const std::set<std::string, std::less<>> vars{"n"};
  for (auto _ : state) benchmark::DoNotOptimize(Expression::parse("(1 - 1/(n+1)) * (1 + cos(pi*n))/2 + exp(i*n)^2", vars));
}
BENCHMARK(BM_ExpressionParse);

void BM_SequenceEvaluate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SequenceFunction::from_source("(1 - 1/(n+1)) * exp(i*pi*n)", n));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * state.range(0)));
}
BENCHMARK(BM_SequenceEvaluate)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
