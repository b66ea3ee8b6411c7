#include <benchmark/benchmark.h>

#include <complex>

#include "fracdu/mittag_leffler.hpp"

namespace {

void BM_MlSmallArgument(benchmark::State& state) {
  const std::complex<double> z(-0.8, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(fracdu::ml(0.7, 1.0, z));
}
BENCHMARK(BM_MlSmallArgument);

void BM_MlModerateArgument(benchmark::State& state) {
  const std::complex<double> z(-12.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(fracdu::ml(0.6, 0.6, z));
}
BENCHMARK(BM_MlModerateArgument);

void BM_MlAsymptotic(benchmark::State& state) {
  const std::complex<double> z(-400.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(fracdu::ml(0.5, 1.0, z));
}
BENCHMARK(BM_MlAsymptotic);

}  // namespace
