#include <benchmark/benchmark.h>

#include "ipfcsim/fault.hpp"
#include "ipfcsim/grid.hpp"
#include "ipfcsim/scenario.hpp"

using namespace ipfcsim;

static void BM_PrefaultSolve(benchmark::State& state) {
  const GridModel g = default_grid8();
  const NetworkSolver solver(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.solve_prefault({}));
  }
}
BENCHMARK(BM_PrefaultSolve);

static void BM_FaultSolve(benchmark::State& state) {
  SplitInfo split;
  const GridModel g = split_branch(default_grid8(), "5", 0.8, &split);
  const NetworkSolver solver(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solver.solve_fault(FaultKind::single_line_ground, split.aux_bus, 0.01, {}));
  }
}
BENCHMARK(BM_FaultSolve);

static void BM_SolverSetup(benchmark::State& state) {
  const GridModel g = default_grid8();
  for (auto _ : state) {
    NetworkSolver solver(g);
    benchmark::DoNotOptimize(&solver);
  }
}
BENCHMARK(BM_SolverSetup);

static void BM_ScenarioRun(benchmark::State& state) {
  Scenario s;
  s.name = "bench";
  s.grid_text = builtin_grid8_text();
  s.mode = IpfcMode::preset_q_inject;
  s.fault = {FaultKind::three_phase, "5", 0.8, 0.0};
  s.t_fault = 0.1;
  s.t_end = 0.2;
  s.dt = 0.001;
  s.relay_branch = "5";
  s.config_text = "bench";
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(s));
  }
  state.SetItemsProcessed(state.iterations() * s.step_count());
}
BENCHMARK(BM_ScenarioRun);

BENCHMARK_MAIN();
