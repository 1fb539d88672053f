#include <benchmark/benchmark.h>

#include "slitgrate/scattering.hpp"

using namespace slitgrate;

namespace {

const GratingConfig kGrating(1.3, 0.02);
const double kKappa = 1.5;
const double kK = 3.0;

void BM_KernelSet(benchmark::State& state) {
  for (auto _ : state) {
    KernelSet ks(kGrating, kKappa, kK);
    benchmark::DoNotOptimize(ks.beta_e());
  }
}
BENCHMARK(BM_KernelSet)->Unit(benchmark::kMicrosecond);

void BM_ExteriorKernel(benchmark::State& state) {
  KernelSet ks(kGrating, kKappa, kK);
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks.greens_exterior(z));
    z = z > 2.5 ? 0.1 : z + 0.013;
  }
}
BENCHMARK(BM_ExteriorKernel);

void BM_BuildReduced(benchmark::State& state) {
  const auto ops = static_operators(static_cast<int>(state.range(0)), 8 * static_cast<int>(state.range(0)), 2.0);
  KernelSet ks(kGrating, kKappa, kK);
  for (auto _ : state) benchmark::DoNotOptimize(build_reduced(ks, *ops));
}
BENCHMARK(BM_BuildReduced)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SpectrumPoint(benchmark::State& state) {
  const auto inc = IncidenceSpec::angle(kPi / 6);
  static_operators(16, 128, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_point(kGrating, inc, kK));
}
BENCHMARK(BM_SpectrumPoint)->Unit(benchmark::kMillisecond);

void BM_RefineRoot(benchmark::State& state) {
  const auto inc = IncidenceSpec::angle(kPi / 6);
  const auto seed = resonance_seeds(kGrating, inc, 1)[1];
  for (auto _ : state) benchmark::DoNotOptimize(refine_root(kGrating, inc, seed));
}
BENCHMARK(BM_RefineRoot)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
