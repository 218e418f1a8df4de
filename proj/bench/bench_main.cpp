// Serial reference versus OpenMP paths, plus the per-sample gain kernels.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "bsprop/filters.hpp"
#include "bsprop/harness.hpp"
#include "bsprop/signals.hpp"

using namespace bsprop;

namespace {

Scenario reduced_scenario() {
  auto s = builtin_scenario("blocksparse_wgn");
  s.total_samples = 8000;
  s.schedule.back().start = 4000;
  s.runs = 2;
  return s;
}

void BM_RunScenario(benchmark::State& state) {
  const auto s = reduced_scenario();
  const auto exec = state.range(0) ? Execution::kParallel : Execution::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(s, exec));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_RunScenario)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SynthesizeDesired(benchmark::State& state) {
  const auto x = gen_wgn(80000, 1);
  PathSchedule schedule{{{0, make_block_sparse_ir(1024, {{257, 32}}, 2)},
                         {40000, make_block_sparse_ir(1024, {{257, 16}, {769, 32}}, 3)}}};
  const auto exec = state.range(0) ? Execution::kParallel : Execution::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_desired(x, schedule, exec));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_SynthesizeDesired)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

std::vector<double> estimate(std::size_t L) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<double> h(L);
  for (auto& v : h) v = normal(rng);
  return h;
}

void BM_GainPnlms(benchmark::State& state) {
  const auto h = estimate(1024);
  std::vector<double> g(h.size());
  for (auto _ : state) {
    gain_pnlms(h, 0.01, 0.01, g);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_GainPnlms);

void BM_GainBsPnlms(benchmark::State& state) {
  const std::size_t P = static_cast<std::size_t>(state.range(0));
  const auto h = estimate(1024);
  std::vector<double> norms(h.size() / P), g(h.size());
  for (auto _ : state) {
    block_norms(h, P, norms);
    gain_bs_pnlms(norms, 0.01, 0.01, P, g);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_GainBsPnlms)->Arg(4)->Arg(16)->Arg(64);

void BM_Adapt(benchmark::State& state) {
  const auto alg = static_cast<Algorithm>(state.range(0));
  FilterConfig c{.length = 1024, .step_size = 0.1, .regularization = 1e-5, .algorithm = alg,
                 .group_size = is_block_sparse(alg) ? 16u : 1u};
  AdaptiveFilter f(c);
  const auto x = gen_wgn(4096, 9).samples;
  std::size_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.adapt(x[n], 0.5 * x[n]));
    n = (n + 1) % x.size();
  }
  state.SetLabel(std::string(to_string(alg)));
}
BENCHMARK(BM_Adapt)->DenseRange(0, 4);

}  // namespace

BENCHMARK_MAIN();
