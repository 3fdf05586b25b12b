#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mdl/codelength.hpp"
#include "mdl/conditional.hpp"
#include "mdl/features.hpp"
#include "mdl/maxent.hpp"

namespace {

using mdl::Alphabet;

void BM_FitMaxent(benchmark::State& state) {
  const std::size_t k = state.range(0), m = state.range(1);
  const auto f = mdl::build_moment_features(Alphabet::integer_levels(k), m);
  std::mt19937_64 rng(1);
  std::vector<std::size_t> idx(50);
  for (auto& v : idx) v = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
  const auto target = mdl::empirical_moments(mdl::Sample(idx, k), f);
  for (auto _ : state) benchmark::DoNotOptimize(mdl::fit_maxent(f, target));
}
BENCHMARK(BM_FitMaxent)->Args({5, 2})->Args({8, 3})->Args({16, 4});

void BM_CompByTypes(benchmark::State& state) {
  const std::size_t k = state.range(0), n = state.range(1);
  const Alphabet a = Alphabet::integer_levels(k);
  const auto f = mdl::build_moment_features(a, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mdl::comp_by_types(f, a, n));
}
BENCHMARK(BM_CompByTypes)->Args({3, 20})->Args({5, 20})->Args({5, 38})->Unit(benchmark::kMillisecond);

void BM_CompExactEnum(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Alphabet a = Alphabet::integer_levels(3);
  const auto f = mdl::build_moment_features(a, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mdl::comp_exact_enum(f, a, n));
}
BENCHMARK(BM_CompExactEnum)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_CondCompGrouped(benchmark::State& state) {
  const std::size_t m = state.range(0);
  std::vector<std::size_t> xs(38);
  for (std::size_t i = 0; i < 38; ++i) xs[i] = (i * 3) % 5;
  const mdl::Sample x(xs, 5);
  const auto f = mdl::build_cond_moment_features(Alphabet::integer_levels(5), mdl::ClassSet::numbered(2), m);
  for (auto _ : state) benchmark::DoNotOptimize(mdl::cond_comp_grouped(f, x));
}
BENCHMARK(BM_CondCompGrouped)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_CondCompMonteCarlo(benchmark::State& state) {
  std::vector<std::size_t> xs(38);
  for (std::size_t i = 0; i < 38; ++i) xs[i] = (i * 3) % 5;
  const mdl::Sample x(xs, 5);
  const auto f = mdl::build_cond_moment_features(Alphabet::integer_levels(5), mdl::ClassSet::numbered(2), 2);
  for (auto _ : state) benchmark::DoNotOptimize(mdl::cond_comp_monte_carlo(f, x, state.range(0), 7));
}
BENCHMARK(BM_CondCompMonteCarlo)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
