#include <benchmark/benchmark.h>

#include <random>

#include "shrinker_ot/transport.hpp"

using namespace shrinker_ot;

namespace {

DiscreteMeasure uniform_cloud(std::mt19937_64& rng, int atoms, int dim) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Eigen::MatrixXd p(atoms, dim);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = coord(rng);
  return DiscreteMeasure(p, Eigen::VectorXd::Constant(atoms, 1.0 / atoms));
}

}  // namespace

static void BM_ExactTransport(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<int>(state.range(0));
  const DiscreteMeasure a = uniform_cloud(rng, n, 3);
  const DiscreteMeasure b = uniform_cloud(rng, n, 3);
  const Eigen::MatrixXd cost = cost_matrix(a, b, CostMetric::EuclideanTangent);
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(a, b, cost).objective);
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExactTransport)->RangeMultiplier(2)->Range(64, 2048)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_Sinkhorn(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<int>(state.range(0));
  const DiscreteMeasure a = uniform_cloud(rng, n, 2);
  const DiscreteMeasure b = uniform_cloud(rng, n, 2);
  const Eigen::MatrixXd cost = cost_matrix(a, b, CostMetric::EuclideanTangent);
  long iterations = 0;
  for (auto _ : state) {
    const TransportResult r = solve_sinkhorn(a, b, cost);
    iterations = r.diagnostics.iterations;
    benchmark::DoNotOptimize(r.objective);
  }
  state.counters["iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_Sinkhorn)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Quantile1d(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<int>(state.range(0));
  const DiscreteMeasure a = uniform_cloud(rng, n, 1);
  const DiscreteMeasure b = uniform_cloud(rng, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_1d_squared(a, b));
}
BENCHMARK(BM_Quantile1d)->Range(1 << 10, 1 << 18);

static void BM_CostMatrix(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto n = static_cast<int>(state.range(0));
  const DiscreteMeasure a = uniform_cloud(rng, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cost_matrix(a, a, CostMetric::EuclideanTangent).sum());
}
BENCHMARK(BM_CostMatrix)->Arg(512)->Arg(4096);
BENCHMARK_MAIN();
