#include <benchmark/benchmark.h>

#include <numbers>

#include "spinpulse/effective_hamiltonian.hpp"
#include "spinpulse/gate_analysis.hpp"
#include "spinpulse/propagator.hpp"

namespace {

using namespace spinpulse;
constexpr double kPi = std::numbers::pi;

AnisotropyProfile sample_profile() {
  return AnisotropyProfile::linear(Vec3(0.01, -0.005, 0.003), RotatedExchange{});
}

void BM_Propagate(benchmark::State& state) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const AnisotropyProfile a = sample_profile();
  const double tol = state.range(0) == 0 ? 1e-9 : 1e-11;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(p, a, tol).gate);
}
BENCHMARK(BM_Propagate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FirstOrderAverages(benchmark::State& state) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const AnisotropyProfile a = sample_profile();
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_bar(p, a).value);
    benchmark::DoNotOptimize(beta_bar(p, a).value);
  }
}
BENCHMARK(BM_FirstOrderAverages)->Unit(benchmark::kMicrosecond);

void BM_EffectiveParams(benchmark::State& state) {
  const PulseProfile p = PulseProfile::sech2(1.0, kPi);
  const AnisotropyProfile a = sample_profile();
  for (auto _ : state) benchmark::DoNotOptimize(effective_params(p, a).params);
}
BENCHMARK(BM_EffectiveParams)->Unit(benchmark::kMillisecond);

void BM_MatrixExp(benchmark::State& state) {
  AnisotropyParams params;
  params.beta = Vec3(0.01, 0.02, 0.0);
  const Operator h = heisenberg_term() + assemble_anisotropy(params);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exp(h, 2.0));
}
BENCHMARK(BM_MatrixExp);

void BM_ExtractParams(benchmark::State& state) {
  AnisotropyParams params;
  params.beta = Vec3(0.01, 0.02, 0.0);
  params.mu = Vec3(0.0, 0.0, 0.001);
  const Operator u = effective_gate(params, 2.0).gate;
  for (auto _ : state) benchmark::DoNotOptimize(extract_params(u, 2.0).params);
}
BENCHMARK(BM_ExtractParams);

}  // namespace

BENCHMARK_MAIN();
