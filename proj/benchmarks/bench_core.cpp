#include <benchmark/benchmark.h>

#include <array>

#include "qkd2e/protocol.hpp"
#include "qkd2e/wigner.hpp"

using namespace qkd2e;

static void BM_PartialMeasure(benchmark::State& state) {
  const StateVector psi = biphoton_state();
  const MeasurementBasis basis = pol_basis(0.3);
  const std::array<std::size_t, 1> sub{factor::bob_pol};
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_measure(psi, kPairFactors, sub, basis, rng.uniform()));
  }
}
BENCHMARK(BM_PartialMeasure);

static void BM_HaarRotation(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(haar_rotation(n, rng));
}
BENCHMARK(BM_HaarRotation)->Arg(2)->Arg(4);

static void BM_RunSession(benchmark::State& state) {
  SessionConfig c;
  c.n_pairs = static_cast<std::uint64_t>(state.range(0));
  c.threads = 1;
  c.eve = EavesdropConfig{};
  c.eve->strategy = Strategy::breidbart;
  c.eve->eta = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_session(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunSession)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_WignerSession(benchmark::State& state) {
  SessionConfig c;
  c.protocol = Protocol::ekert_wigner;
  c.channel = Channel::single_pol;
  c.n_pairs = 10000;
  c.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wigner_session(c, default_wigner_settings(), {1.0, 0.0}));
  }
}
BENCHMARK(BM_WignerSession)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
