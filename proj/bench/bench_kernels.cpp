// Serial reference vs OpenMP for the parallel kernels.
#include <benchmark/benchmark.h>

#include "fluctwork/finite_bath.hpp"
#include "fluctwork/quantum_identities.hpp"
#include "fluctwork/quantum_suite.hpp"
#include "fluctwork/sampling.hpp"
#include "fluctwork/sweep.hpp"

namespace {

using namespace fluctwork;

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

struct BathFixture {
  ThermalContext ctx{1.0};
  BathModel bath = BathModel::canonical(ctx, 20);
  WorkKernel kernel;

  BathFixture()
      : kernel([&] {
          const double d = bath.delta;
          const auto e = EnergySpectrum::from_energies(std::vector<double>{0.0, 2 * d});
          return random_dyadic_kernel(e, e, WorkGrid({-4 * d, -2 * d, 0.0, 2 * d, 4 * d}), ctx, 8, 11);
        }()) {}
};

void BM_RealizeBath(benchmark::State& state) {
  BathFixture f;
  for (auto _ : state) benchmark::DoNotOptimize(realize_finite_bath(f.kernel, f.bath, f.ctx, 8, mode(state)));
}
BENCHMARK(BM_RealizeBath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_VerifyBath(benchmark::State& state) {
  BathFixture f;
  const auto r = realize_finite_bath(f.kernel, f.bath, f.ctx, 8);
  for (auto _ : state) benchmark::DoNotOptimize(verify_realization(r, f.kernel, mode(state)));
}
BENCHMARK(BM_VerifyBath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sampling(benchmark::State& state) {
  const RandomInstance in = make_random_instance(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_trajectories(in.state, in.kernel, in.ctx, 1, 200000, mode(state)));
}
BENCHMARK(BM_Sampling)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_IdentitySweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep_identities(1, 64, mode(state)));
}
BENCHMARK(BM_IdentitySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_QuantumCrooks(benchmark::State& state) {
  const QuantumInstance in = make_quantum_instance(5, 2, 16);
  const ChannelPair ch = channels_from_unitary(in.u, in.spectra, in.ctx);
  for (auto _ : state)
    benchmark::DoNotOptimize(quantum_crooks_check(in.u, ch, in.spectra, in.ladder, in.ctx, mode(state)));
}
BENCHMARK(BM_QuantumCrooks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
