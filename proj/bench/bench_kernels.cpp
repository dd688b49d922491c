#include <benchmark/benchmark.h>

#include "vh/macro_schemes.hpp"
#include "vh/particle_sim.hpp"

using namespace vh;

namespace {

void neighbour_sums_bench(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ParticleEnsemble e = init_uniform(n, 10.0, 1.0, 0.5, 0.2, 0.1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(neighbour_sums(e, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void macro_step_bench(benchmark::State& state, Scheme s, Exec exec) {
  const ModelCoefficients k = make_coefficients(1.0);
  const MacroGrid g = riemann_grid({1, 0.314}, {2, 1.54}, k, static_cast<std::size_t>(state.range(0)), 10.0,
                                   Boundary::Neumann);
  SchemeConfig cfg;
  cfg.scheme = s;
  cfg.exec = exec;
  const double dt = 0.4 * g.dx / g.system().max_speed_bound();
  for (auto _ : state) benchmark::DoNotOptimize(step(g, cfg, dt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(neighbour_sums_bench, serial, Exec::Serial)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(neighbour_sums_bench, parallel, Exec::Parallel)->Arg(5000)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(macro_step_bench, cons_serial, Scheme::Conservative, Exec::Serial)->Arg(4000);
BENCHMARK_CAPTURE(macro_step_bench, cons_parallel, Scheme::Conservative, Exec::Parallel)->Arg(4000);
BENCHMARK_CAPTURE(macro_step_bench, split_serial, Scheme::Splitting, Exec::Serial)->Arg(4000);
BENCHMARK_CAPTURE(macro_step_bench, split_parallel, Scheme::Splitting, Exec::Parallel)->Arg(4000);

BENCHMARK_MAIN();
