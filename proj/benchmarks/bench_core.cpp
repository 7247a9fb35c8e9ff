#include <benchmark/benchmark.h>

#include "rwrs/experiments.hpp"
#include "rwrs/localtime.hpp"
#include "rwrs/scenery.hpp"
#include "rwrs/walk.hpp"

namespace {

using namespace rwrs;

void BM_IidWalk(benchmark::State& state) {
  const auto model = WalkModel::rademacher();
  const long long n = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto path = gen_iid_walk(model, n, seed++);
    benchmark::DoNotOptimize(path.sites.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_IidWalk)->Arg(1 << 12)->Arg(1 << 16);

void BM_FgnIncrements(benchmark::State& state) {
  const FgnSampler sampler(0.75, state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto x = sampler.increments(seed++);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FgnIncrements)->Arg(1 << 10)->Arg(1 << 14);

void BM_SceneryMa(benchmark::State& state) {
  const auto model = SceneryModel::causal_ma(0.5, InnovationDist::Gaussian,
                                             Profile::periodic(1.0, 7));
  const long long m = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto s = gen_scenery(model, -m, m, seed++);
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(state.iterations() * (2 * m + 1));
}
BENCHMARK(BM_SceneryMa)->Arg(512)->Arg(4096);

void BM_LocalTimeAndAlpha(benchmark::State& state) {
  const auto path = gen_iid_walk(WalkModel::rademacher(), state.range(0), 7);
  for (auto _ : state) {
    const auto profile = local_time(path);
    benchmark::DoNotOptimize(self_intersection(profile));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LocalTimeAndAlpha)->Arg(1 << 12)->Arg(1 << 16);

void BM_ZPrefixes(benchmark::State& state) {
  const long long n = state.range(0);
  const auto walk = WalkModel::rademacher();
  const auto path = gen_iid_walk(walk, n, 7);
  const long long m = scenery_halfwidth(walk, n);
  const auto scn =
      gen_scenery(SceneryModel::iid(InnovationDist::Gaussian), -m, m, 3);
  for (auto _ : state) {
    auto z = z_prefixes(path, scn);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ZPrefixes)->Arg(1 << 16);

void BM_SllnReplicaGrid(benchmark::State& state) {
  ExperimentConfig config;
  config.walk = WalkModel::rademacher();
  config.scenery = SceneryModel::causal_ma(0.5, InnovationDist::Gaussian,
                                           Profile::periodic(1.0, 7));
  config.n_grid = {1 << 10, 1 << 12, 1 << 14};
  config.replicas = 8;
  config.base_seed = 1;
  ExecOptions opts;
  opts.threads = 1;
  for (auto _ : state) {
    auto report = run_slln(config, opts);
    benchmark::DoNotOptimize(report.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * config.replicas *
                          config.n_grid.back());
}
BENCHMARK(BM_SllnReplicaGrid);

}  // namespace

BENCHMARK_MAIN();
