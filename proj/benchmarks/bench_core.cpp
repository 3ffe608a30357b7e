// Microbenchmarks for the computational hot spots: spectral transforms,
// dealiased products, right-hand-side assembly, a full adaptive-quality
// stage step, and the energy functionals.  Run with --benchmark_filter=...
// to focus on one family.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "sbolab/diagnostics.hpp"
#include "sbolab/fourier.hpp"
#include "sbolab/grid.hpp"
#include "sbolab/integrate.hpp"
#include "sbolab/model.hpp"

namespace {

using namespace sbolab;

SboState demo_state(std::size_t n) {
  const GridPtr g = make_grid(100.0, n);
  InitDataSpec su;
  su.family = InitDataSpec::Family::gaussian;
  su.amplitude = 1.0;
  su.width = 2.0;
  su.center = 50.0;
  su.wavenumber = 1.0;
  InitDataSpec sv = su;
  sv.amplitude = 0.5;
  sv.width = 3.0;
  sv.wavenumber = 0.0;
  return SboState{eval_complex(su, g), eval_real(sv, g), 0.0};
}

void bm_transform_roundtrip(benchmark::State& state) {
  const SboState s = demo_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(from_spectral(to_spectral(s.u)));
  }
}
BENCHMARK(bm_transform_roundtrip)->Arg(256)->Arg(1024)->Arg(4096);

void bm_riesz(benchmark::State& state) {
  const SboState s = demo_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(riesz(s.u, 1.5));
  }
}
BENCHMARK(bm_riesz)->Arg(256)->Arg(1024)->Arg(4096);

void bm_dealiased_product(benchmark::State& state) {
  const SboState s = demo_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dealiased_product(s.v, s.v));
  }
}
BENCHMARK(bm_dealiased_product)->Arg(256)->Arg(1024)->Arg(4096);

void bm_rhs(benchmark::State& state) {
  const SboState s = demo_state(static_cast<std::size_t>(state.range(0)));
  const SboParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs(s, p));
  }
}
BENCHMARK(bm_rhs)->Arg(256)->Arg(1024)->Arg(4096);

void bm_step_once(benchmark::State& state) {
  const SboState s = demo_state(static_cast<std::size_t>(state.range(0)));
  const SboParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_once(s, p, 1e-3));
  }
}
BENCHMARK(bm_step_once)->Arg(256)->Arg(1024)->Arg(4096);

void bm_modified_energy(benchmark::State& state) {
  const SboState s = demo_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(modified_energy(s, 1.5));
  }
}
BENCHMARK(bm_modified_energy)->Arg(256)->Arg(1024)->Arg(4096);

void bm_conserved(benchmark::State& state) {
  const SboState s = demo_state(static_cast<std::size_t>(state.range(0)));
  const SboParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(conserved_quantities(s, p));
  }
}
BENCHMARK(bm_conserved)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
