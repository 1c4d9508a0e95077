#include <benchmark/benchmark.h>

#include <cmath>

#include "erds/duality.hpp"
#include "erds/dynamics.hpp"
#include "erds/mass_analysis.hpp"
#include "erds/random_fields.hpp"

using namespace erds;

static void BM_SpectralStep(benchmark::State& state) {
  const Grid g(2, static_cast<int>(state.range(0)), 8.0);
  const Integrator integ(g, ReactionNetwork::four_species(), DiffusionCoeffs({0.5, 2, 1, 1.5}, 0.5, 2),
                         Scheme::imex_spectral);
  SpeciesState s = random_bump_state(g, 4, 1);
  for (auto _ : state) {
    s = integ.step(s, 1e-3);
    benchmark::DoNotOptimize(s.species.front()[0]);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_SpectralStep)->Arg(64)->Arg(128)->Arg(256);

static void BM_FreeSpacePoisson(benchmark::State& state) {
  const Grid g(3, static_cast<int>(state.range(0)), 8.0);
  const Field m = Field::from_function(g, [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
  for (auto _ : state) {
    const PotentialField p = poisson_potential(m, PoissonBackend::free_space_kernel);
    benchmark::DoNotOptimize(p.phi[0]);
  }
}
BENCHMARK(BM_FreeSpacePoisson)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_DualSolve(benchmark::State& state) {
  const DualProblem p = random_dual_problem(2, 3, 0.5, 2.0);
  DualOptions o;
  o.n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const DualSolution u = solve_dual_final(p, 2, o);
    benchmark::DoNotOptimize(u.sup_abs_q2);
  }
}
BENCHMARK(BM_DualSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
