#include <benchmark/benchmark.h>

#include <cmath>

#include "fracdu/duhamel.hpp"

namespace {

using namespace fracdu;

CauchyProblem subdiffusion(int points, int steps) {
  const SpaceGrid g = SpaceGrid::line(points);
  const Field shape = Field::sample(g, [](double x, double) { return std::cos(x); }, true);
  return {FractionalOrder::from_alpha(0.5), Symbol::laplacian(), {shape},
          SourceTerm::catalog({{CatalogProfile::monomial(2.0), shape}}), TimeGrid::over(1.0, steps)};
}

void BM_DuhamelSolve(benchmark::State& state) {
  const CauchyProblem p = subdiffusion(32, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(full_solve(p, SolveMethod::duhamel));
}
BENCHMARK(BM_DuhamelSolve)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_NeumannOracle(benchmark::State& state) {
  const CauchyProblem p = subdiffusion(32, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(neumann_series_solution(p, 30));
}
BENCHMARK(BM_NeumannOracle)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
