#include <benchmark/benchmark.h>

#include <cmath>

#include "fracdu/spectral.hpp"

namespace {

using fracdu::Field;
using fracdu::SpaceGrid;

Field smooth_field(const SpaceGrid& g) {
  return Field::sample(g, [](double x, double y) { return std::cos(x) * std::sin(2 * y) + 0.5; }, true);
}

void BM_ForwardInverse1D(benchmark::State& state) {
  const SpaceGrid g = SpaceGrid::line(static_cast<int>(state.range(0)));
  const Field f = smooth_field(g);
  for (auto _ : state) benchmark::DoNotOptimize(fracdu::inverse(fracdu::forward(f)));
}
BENCHMARK(BM_ForwardInverse1D)->Arg(64)->Arg(1024)->Arg(16384);

void BM_ApplyLaplacian2D(benchmark::State& state) {
  const SpaceGrid g = SpaceGrid::square(static_cast<int>(state.range(0)));
  const fracdu::SpectralField sf = fracdu::forward(smooth_field(g));
  for (auto _ : state) benchmark::DoNotOptimize(fracdu::apply_symbol(sf, fracdu::Symbol::laplacian()));
}
BENCHMARK(BM_ApplyLaplacian2D)->Arg(32)->Arg(128);

}  // namespace
