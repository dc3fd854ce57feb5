#include <benchmark/benchmark.h>

#include "ramen/invariance.hpp"
#include "ramen/kernel.hpp"
#include "ramen/nuisance.hpp"
#include "ramen/rng.hpp"
#include "ramen/scm.hpp"
#include "ramen/search.hpp"

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  ramen::Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

void BM_GaussianGram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd a = random_matrix(n, 5, 1);
  const Eigen::MatrixXd b = random_matrix(n, 5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ramen::gaussian_gram(a, b, 1.0));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_GaussianGram)->Arg(256)->Arg(1024)->Complexity();

void BM_MedianBandwidth(benchmark::State& state) {
  const Eigen::MatrixXd pts = random_matrix(static_cast<int>(state.range(0)), 5, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ramen::median_bandwidth(pts, 2000, 7));
  }
}
BENCHMARK(BM_MedianBandwidth)->Arg(500)->Arg(2000);

void BM_CrossUStatistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ramen::Rng rng(4);
  ramen::ResidualVector res;
  res.features = random_matrix(n, 5, 5);
  res.values.resize(n);
  for (int i = 0; i < n; ++i) res.values(i) = rng.normal();
  const ramen::KernelConfig kern{1.0, 2000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ramen::cross_u_statistic(res, kern, 11));
  }
}
BENCHMARK(BM_CrossUStatistic)->Arg(500)->Arg(2500);

void BM_FitLogistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ramen::Rng rng(6);
  Eigen::MatrixXd x = random_matrix(n, 5, 8);
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i)
    t(i) = rng.bernoulli(1.0 / (1.0 + std::exp(-x(i, 0)))) ? 1.0 : 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ramen::fit_logistic(x, t, 1e-3));
  }
}
BENCHMARK(BM_FitLogistic)->Arg(2500)->Arg(12500);

void BM_CombinatorialSelect(benchmark::State& state) {
  ramen::KnownDagScenario scenario;
  scenario.d = static_cast<int>(state.range(0));
  const ramen::KnownDagSample sample =
      ramen::sample_known_dag(scenario, 400, 3, 21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ramen::combinatorial_select(sample.data, std::nullopt, 1));
  }
}
BENCHMARK(BM_CombinatorialSelect)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
