// Copyright 2026 The dstcollapse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Microbenchmarks of the inner loops: propagator step, collapse step, walk
// step, RNG block and the momentum transform.

#include <benchmark/benchmark.h>

#include "dstc/collapse.hpp"
#include "dstc/ensemble.hpp"
#include "dstc/rng.hpp"
#include "dstc/schrodinger.hpp"
#include "dstc/spectral.hpp"
#include "dstc/two_level.hpp"

using namespace dstc;

namespace {

const UnitSystem kUnits = UnitSystem::scaled(100.0);

LatticeGrid grid_of(std::size_t n) {
  return LatticeGrid(n, 0.05, -0.025 * static_cast<double>(n), Boundary::kPeriodic);
}

void BM_CrankNicolsonStep(benchmark::State& state) {
  const auto g = grid_of(static_cast<std::size_t>(state.range(0)));
  const auto pot = make_potential("harmonic(1)", g, kUnits);
  auto psi = gaussian_packet(g, 0.0, 1.0, 1.0, 1.0);
  CrankNicolson cn(pot, kUnits, {0.01});
  for (auto _ : state) {
    cn.step_in_place(psi);
    benchmark::DoNotOptimize(psi.amp.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CrankNicolsonStep)->RangeMultiplier(4)->Range(64, 16384);

void BM_CollapseStepTwoSite(benchmark::State& state) {
  const auto sys = make_two_site_system(1.0, kUnits);
  CollapseConfig cfg;
  cfg.cell_width = sys.cell_width;
  cfg.rate = 0.0;  // keep the state in superposition
  CollapseEvolver evolver(sys.potential, kUnits, cfg);
  CounterRng rng(1, 0);
  auto psi = sys.superpose(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(evolver.advance(psi, rng));
}
BENCHMARK(BM_CollapseStepTwoSite);

void BM_CollapseStepLattice(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = grid_of(n);
  const auto pot = make_potential("harmonic(1)", g, kUnits);
  CollapseConfig cfg;
  cfg.cell_width = n / 8;
  cfg.rate = 0.0;
  CollapseEvolver evolver(pot, kUnits, cfg);
  CounterRng rng(2, 0);
  auto psi = gaussian_packet(g, 0.0, 1.0, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolver.advance(psi, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CollapseStepLattice)->RangeMultiplier(4)->Range(64, 4096);

void BM_WalkStep(benchmark::State& state) {
  CounterRng rng(3, 0);
  double rho = 0.5;
  for (auto _ : state) {
    rho = walk_step(rho, 1e-6, rng);
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(BM_WalkStep);

void BM_PhiloxUniform(benchmark::State& state) {
  CounterRng rng(4, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_PhiloxUniform);

void BM_ToMomentum(benchmark::State& state) {
  const auto g = grid_of(static_cast<std::size_t>(state.range(0)));
  const auto psi = gaussian_packet(g, 0.0, 1.0, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(to_momentum(psi, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ToMomentum)->RangeMultiplier(4)->Range(64, 16384);

}  // namespace

BENCHMARK_MAIN();
