#include <benchmark/benchmark.h>

#include "memnet/graph.hpp"
#include "memnet/h2.hpp"
#include "memnet/simulate.hpp"
#include "memnet/stability.hpp"

using namespace memnet;

namespace {

const WeightedGraph& ring20() {
  static const WeightedGraph g = generate_graph(GraphFamily::ring_lattice, 20, 2);
  return g;
}

const Spectrum& ring20_spectrum() {
  static const Spectrum s = spectrum(ring20());
  return s;
}

void BM_Spectrum(benchmark::State& state) {
  const WeightedGraph g =
      generate_graph(GraphFamily::ring_lattice, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum(g));
  }
}
BENCHMARK(BM_Spectrum)->Arg(50)->Arg(100)->Arg(200);

void BM_ConsensusCheck(benchmark::State& state) {
  const ProtocolParams params{0.5, 0.15, static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(consensus_check(ring20_spectrum(), params));
  }
}
BENCHMARK(BM_ConsensusCheck)->Arg(1)->Arg(10)->Arg(40);

void BM_JurySchur(benchmark::State& state) {
  const ModePolynomial p =
      ModePolynomial::trinomial(static_cast<int>(state.range(0)), -0.3, -0.45);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jury_schur(p));
  }
}
BENCHMARK(BM_JurySchur)->Arg(10)->Arg(40);

void BM_H2Analytic(benchmark::State& state) {
  const ProtocolParams params{0.6, 0.15, static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(h2_analytic(ring20_spectrum(), params));
  }
}
BENCHMARK(BM_H2Analytic)->Arg(1)->Arg(10)->Arg(40);

void BM_H2HalfAlpha(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        h2_half_alpha(ring20_spectrum(), 0.15, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_H2HalfAlpha)->Arg(10)->Arg(40);

void BM_H2LyapunovOracle(benchmark::State& state) {
  const ProtocolParams params{0.6, 0.15, static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(h2_lyapunov_oracle(ring20_spectrum(), params));
  }
}
BENCHMARK(BM_H2LyapunovOracle)->Arg(1)->Arg(10);

void BM_EstimateMsd(benchmark::State& state) {
  SimConfig cfg;
  cfg.seed = 1;
  cfg.trials = 4;
  cfg.horizon = 2000;
  cfg.burn_in = 200;
  const ProtocolParams params{0.5, 0.15, 2, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_msd(ring20(), params, cfg, /*threads=*/1));
  }
}
BENCHMARK(BM_EstimateMsd)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
