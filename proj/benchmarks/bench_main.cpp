#include <benchmark/benchmark.h>

#include "phantom/analysis.hpp"
#include "phantom/engine.hpp"

namespace phantom {
namespace {

SimConfig bench_config(Environment env, int users) {
  SimConfig c = SimConfig::defaults_for(env);
  c.scenario.num_users = users;
  return c;
}

void BM_SampleLinks(benchmark::State& state) {
  const SimConfig c = bench_config(state.range(0) ? Environment::indoor : Environment::outdoor, 200);
  const Topology t = build_topology(c.scenario);
  const std::vector<UserState> users = spawn_users(c.scenario, t);
  Rng rng = make_rng(c.seed, Stream::shadowing);
  LinkTable links;
  SinrSnapshot snap;
  for (auto _ : state) {
    sample_links(users, t, c.propagation, rng, links);
    compute_sinr(t, links, c.propagation, snap);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * c.scenario.num_users * t.num_cells());
}
BENCHMARK(BM_SampleLinks)->Arg(0)->Arg(1);

void BM_SimulationStep(benchmark::State& state) {
  const SimConfig c = bench_config(Environment::indoor, static_cast<int>(state.range(0)));
  Simulation sim(c, c.seed);
  for (auto _ : state) sim.step();
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulationStep)->Arg(50)->Arg(200)->Arg(500);

void BM_BlockingProbability(benchmark::State& state) {
  analysis::TrafficParams p;
  p.lambda_n = 4.0;
  p.lambda_h = 2.0;
  p.total_channels = static_cast<int>(state.range(0));
  p.guard_channels = p.total_channels / 5;
  for (auto _ : state) benchmark::DoNotOptimize(analysis::blocking_probability(p));
}
BENCHMARK(BM_BlockingProbability)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
}  // namespace phantom

BENCHMARK_MAIN();
