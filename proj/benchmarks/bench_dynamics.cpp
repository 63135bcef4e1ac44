#include <benchmark/benchmark.h>

#include "dyonlab/dynamics.hpp"
#include "dyonlab/nbody.hpp"

using namespace dyonlab;

namespace {

SystemSpec micz_system() {
  SystemSpec sys;
  sys.metric = MetricSpec::flat();
  sys.centers = {DyonCenter{{0, 0, 0}, 1.0, 0.0}};
  sys.potential = PotentialSpec::coulomb(-1.0);
  sys.replacement = ReplacementMode::OneCenter;
  return sys;
}

void BM_EquationsOfMotion(benchmark::State& state) {
  const SystemSpec sys = micz_system();
  const PhaseState st{{1.2, 0.3, 0.7}, {0.1, 0.8, -0.2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(equations_of_motion(sys, st));
  }
}
BENCHMARK(BM_EquationsOfMotion);

void BM_Rk4Step(benchmark::State& state) {
  const SystemSpec sys = micz_system();
  PhaseState st{{1.2, 0.3, 0.7}, {0.1, 0.8, -0.2}};
  for (auto _ : state) {
    st = step_rk4(sys, st, 1e-3);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_Rk4Step);

void BM_ImplicitMidpointStep(benchmark::State& state) {
  const SystemSpec sys = micz_system();
  PhaseState st{{1.2, 0.3, 0.7}, {0.1, 0.8, -0.2}};
  for (auto _ : state) {
    st = step_implicit_midpoint(sys, st, 1e-3);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_ImplicitMidpointStep);

void BM_NBodyForces(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  NBodySpec spec;
  spec.omega = 1.0;
  NBodyPhaseState st;
  for (int i = 0; i < n; ++i) {
    spec.e_charge.push_back(1.0);
    spec.g_charge.push_back(0.1 * i);
    st.x.push_back({1.0 + i, 0.3 * i, -0.2 * i});
    st.pi.push_back({0.0, 0.1, 0.0});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(nbody_equations_of_motion(spec, st));
  }
}
BENCHMARK(BM_NBodyForces)->Arg(3)->Arg(8)->Arg(32);

}  // namespace
