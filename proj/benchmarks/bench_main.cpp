#include "sievevar/bootstrap.hpp"
#include "sievevar/delta.hpp"
#include "sievevar/dgp.hpp"
#include "sievevar/estimate.hpp"
#include "sievevar/var_core.hpp"

#include <benchmark/benchmark.h>

using namespace sievevar;

namespace {

const SamplePath& sample(std::size_t t) {
  static const SamplePath p300 = simulate_varma(default_desk_dgp(), 300, 201, RandomStream(1));
  static const SamplePath p1000 = simulate_varma(default_desk_dgp(), 1000, 201, RandomStream(1));
  return t == 300 ? p300 : p1000;
}

void BM_MaFromAr(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const auto fit = fit_var_ls(sample(1000), p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ma_from_ar(fit.model.ar_hat, 30));
  }
}
BENCHMARK(BM_MaFromAr)->Arg(10)->Arg(30);

void BM_FitVarLs(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const auto t = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_var_ls(sample(t), p));
  }
}
BENCHMARK(BM_FitVarLs)->Args({10, 300})->Args({30, 300})->Args({10, 1000});

void BM_FiniteOrderCovs(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const auto fit = fit_var_ls(sample(300), p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(finite_order_covs(fit.model.ar_hat, fit.model.moment_matrix,
                                               fit.model.sigma_u_hat, 30));
  }
}
BENCHMARK(BM_FiniteOrderCovs)->Arg(10)->Arg(30);

void BM_SieveCovs(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const auto fit = fit_var_ls(sample(300), p);
  const MatrixXd gamma = build_gamma_p(sample_autocov(sample(300).values, p - 1), p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sieve_covs(fit.model.ar_hat, gamma, fit.model.sigma_u_hat, 30));
  }
}
BENCHMARK(BM_SieveCovs)->Arg(10)->Arg(30);

void BM_BootstrapDistribution(benchmark::State& state) {
  const auto fit = fit_var_ls(sample(300), 10);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bootstrap_irf_distribution(fit, sample(300).values, 30, m, RandomStream(2)));
  }
}
BENCHMARK(BM_BootstrapDistribution)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BiasCorrectedBootstrap(benchmark::State& state) {
  const auto fit = fit_var_ls(sample(300), 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bias_corrected_bootstrap(fit, sample(300).values, 30, 100, 0.95, RandomStream(3)));
  }
}
BENCHMARK(BM_BiasCorrectedBootstrap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
