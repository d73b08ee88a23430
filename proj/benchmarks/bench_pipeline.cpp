#include <benchmark/benchmark.h>

#include "gauss_stab/channel.hpp"
#include "gauss_stab/priors.hpp"
#include "gauss_stab/stability.hpp"

namespace {

using namespace gstab;

const PriorSpec kBump{prior::GaussianBump{1.0, 0.5, 0.5, 0.05}};

void BM_BuildPrior(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_prior(kBump, default_x_grid()));
}
BENCHMARK(BM_BuildPrior)->Unit(benchmark::kMillisecond);

void BM_PosteriorField(benchmark::State& state) {
  const auto p = build_prior(kBump, default_x_grid());
  for (auto _ : state) benchmark::DoNotOptimize(posterior_field(p, default_y_grid()));
}
BENCHMARK(BM_PosteriorField)->Unit(benchmark::kMillisecond);

void BM_L2Certificate(benchmark::State& state) {
  const auto p = build_prior(kBump, default_x_grid());
  for (auto _ : state) benchmark::DoNotOptimize(l2_certificate(p, default_y_grid()));
}
BENCHMARK(BM_L2Certificate)->Unit(benchmark::kMillisecond);

void BM_L1Certificate(benchmark::State& state) {
  const auto p = build_prior(kBump, default_x_grid());
  for (auto _ : state) benchmark::DoNotOptimize(l1_certificate(p, 10));
}
BENCHMARK(BM_L1Certificate)->Unit(benchmark::kMillisecond);

}  // namespace
