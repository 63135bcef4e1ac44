#include <benchmark/benchmark.h>

#include "dyonlab/quantum.hpp"
#include "dyonlab/wigner.hpp"

using namespace dyonlab;

namespace {

void BM_Wigner3j(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(wigner_3j(4.0, 3.0, 2.0, 1.0, -2.0, 1.0));
  }
}
BENCHMARK(BM_Wigner3j);

void BM_RadialEigenvalues(benchmark::State& state) {
  RadialProblem p;
  p.metric = MetricSpec::flat();
  p.mu = 1.0;
  p.potential = [](double r) { return -1.0 / r; };
  RadialGrid grid;
  grid.nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial_eigenvalues(p, 0.0, 0.0, 3, grid));
  }
}
BENCHMARK(BM_RadialEigenvalues)->Arg(2000)->Arg(6000)->Unit(benchmark::kMillisecond);

void BM_DipoleElement(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dipole_matrix_element(1.0, 2.0, 1.0, 2.0, 1.0, DipoleComponent::Z));
  }
}
BENCHMARK(BM_DipoleElement);

}  // namespace
