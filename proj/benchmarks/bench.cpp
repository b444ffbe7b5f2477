#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "stlab/evolve.hpp"
#include "stlab/gaussian.hpp"
#include "stlab/madelung.hpp"
#include "stlab/selftrap.hpp"

namespace {

using namespace stlab;

const DimensionlessProfile& profile_u1() {
  static const DimensionlessProfile p = solve_dimensionless(1.0);
  return p;
}

Grid trap_grid(std::int64_t n) { return Grid(-1.2, 1.2, static_cast<std::size_t>(n), GridMode::bounded); }

ComplexField packet(std::int64_t n) {
  const Grid g(-20.0, 20.0, static_cast<std::size_t>(n), GridMode::periodic);
  return gaussian_analytic(GaussianSpec{}, 0.0, g).psi;
}

void bm_solve_profile(benchmark::State& state) {
  const double u0 = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state) {
    auto prof = solve_dimensionless(u0);
    benchmark::DoNotOptimize(prof.x_m);
  }
}
BENCHMARK(bm_solve_profile)->Arg(1)->Arg(4)->Arg(16);

void bm_rescale(benchmark::State& state) {
  const auto& prof = profile_u1();
  const PhysParams pp{};
  const Grid g = trap_grid(state.range(0));
  for (auto _ : state) {
    auto st = rescale(prof, pp, g);
    benchmark::DoNotOptimize(st.q_m);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_rescale)->Arg(4097)->Arg(16385);

void bm_quantum_potential(benchmark::State& state) {
  const PhysParams pp{};
  const Grid g = trap_grid(state.range(0));
  const auto st = rescale(profile_u1(), pp, g);
  for (auto _ : state) {
    auto qp = quantum_potential(st.rho, pp, 1e-6);
    benchmark::DoNotOptimize(qp.value[0]);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_quantum_potential)->Arg(4097)->Arg(16385);

void bm_kinetic_step(benchmark::State& state) {
  const PhysParams pp{};
  ComplexField psi = packet(state.range(0));
  for (auto _ : state) {
    psi = step(psi, 1e-4, pp);
    benchmark::DoNotOptimize(psi[0]);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_kinetic_step)->Arg(2048)->Arg(8192)->Arg(32768);

void bm_analyze(benchmark::State& state) {
  const PhysParams pp{};
  const ComplexField psi = packet(state.range(0));
  for (auto _ : state) {
    auto fields = analyze(psi, 0.0, pp);
    benchmark::DoNotOptimize(fields.theta[0]);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_analyze)->Arg(2048)->Arg(8192);

void bm_evolution_run(benchmark::State& state) {
  const ComplexField psi0 = packet(2048);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  cfg.observer_stride = 10;
  for (auto _ : state) {
    auto rec = run(psi0, PhaseSpec{}, cfg);
    benchmark::DoNotOptimize(rec.snapshots.size());
  }
}
BENCHMARK(bm_evolution_run)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
