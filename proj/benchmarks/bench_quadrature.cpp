#include <benchmark/benchmark.h>

#include "shrinker_ot/bounds.hpp"
#include "shrinker_ot/numerics.hpp"
#include "shrinker_ot/quadrature.hpp"

using namespace shrinker_ot;

static void BM_GaussHermite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(numerics::gauss_hermite(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GaussHermite)->Arg(16)->Arg(96);

static void BM_DiscretizePullback(benchmark::State& state) {
  const ShrinkerModel model = ShrinkerModel::cylinder(3, 1);
  Scheme scheme;
  scheme.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize_pullback(model, scheme).total_mass());
}
BENCHMARK(BM_DiscretizePullback)->Arg(2048)->Arg(4096)->Unit(benchmark::kMicrosecond);

static void BM_FitPotential(benchmark::State& state) {
  const ShrinkerModel model = ShrinkerModel::cylinder(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_potential_bound(model, 0.0).a);
}
BENCHMARK(BM_FitPotential)->Unit(benchmark::kMillisecond);

static void BM_GammaIntegral(benchmark::State& state) {
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_integral(s, 3, 0.97));
    s = s < 4.0 ? s + 0.5 : 0.0;
  }
}
BENCHMARK(BM_GammaIntegral);
