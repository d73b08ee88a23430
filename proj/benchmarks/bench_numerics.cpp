#include <cmath>

#include <benchmark/benchmark.h>

#include "gauss_stab/hermite.hpp"
#include "gauss_stab/numerics.hpp"
#include "gauss_stab/operators.hpp"

namespace {

using namespace gstab;

void BM_FftConvolve(benchmark::State& state) {
  const Grid g(-16.0, 16.0, static_cast<std::size_t>(state.range(0)) + 1);
  const auto f = GridFunction::sample(g, [](double x) { return std::exp(-0.5 * x * x); });
  const auto k = GridFunction::sample(g, [](double x) { return std::abs(x) < 1.0 ? 1.0 : 0.0; });
  for (auto _ : state) benchmark::DoNotOptimize(fft_convolve(f, k, EdgePolicy::kUnchecked));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FftConvolve)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Dawson(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dawson(x));
    x = x > 20.0 ? 0.0 : x + 0.01;
  }
}
BENCHMARK(BM_Dawson);

void BM_HermiteBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g(-24.0, 24.0, 12289);
  for (auto _ : state) benchmark::DoNotOptimize(build_basis(0.5, n, g));
}
BENCHMARK(BM_HermiteBasis)->Arg(20)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PhiFourierNorm(benchmark::State& state) {
  const Grid omega(-4.0, 4.0, 2049);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phi_fourier_l1_norm(n, 0.5, omega));
}
BENCHMARK(BM_PhiFourierNorm)->Arg(4)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
