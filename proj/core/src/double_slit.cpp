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

#include "dstc/double_slit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dstc/error.hpp"
#include "dstc/parallel.hpp"
#include "dstc/schrodinger.hpp"

namespace dstc {

namespace {

WaveFunction slit_packet(const LatticeGrid& grid, double centre, double width) {
  std::vector<Complex> amp(grid.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double d = (grid.x(i) - centre) / width;
    amp[i] = std::exp(-0.25 * d * d);
  }
  WaveFunction psi(grid, std::move(amp));
  psi.normalize();
  return psi;
}

std::vector<double> density(const WaveFunction& psi) {
  std::vector<double> d(psi.amp.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(psi.amp[i]);
  return d;
}

}  // namespace

double visibility(const std::vector<double>& x, const std::vector<double>& density, double half_width) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > half_width) continue;
    lo = std::min(lo, density[i]);
    hi = std::max(hi, density[i]);
  }
  if (!(hi > 0.0)) return 0.0;
  return (hi - lo) / (hi + lo);
}

DoubleSlitResult double_slit(const DoubleSlitSpec& spec, bool collapse_on, const UnitSystem& units,
                             const CollapseConfig& cfg_in, std::size_t n_traj, unsigned threads) {
  if (!(spec.separation > 0.0) || !(spec.slit_width > 0.0) || !(spec.screen_time > 0.0)) {
    throw UsageError("double_slit: separation, slit_width and screen_time must be positive");
  }
  if (spec.n_cells % 2 != 0) throw UsageError("double_slit: n_cells must be even");
  const LatticeGrid grid(spec.n_cells, spec.dx, -0.5 * spec.dx * static_cast<double>(spec.n_cells),
                         Boundary::kPeriodic);
  // Band limit: the slit momentum spread must sit well inside the lattice bandwidth.
  const double p_max = std::numbers::pi * units.hbar() / spec.dx;
  if (6.0 * units.hbar() / (2.0 * spec.slit_width) > 0.5 * p_max) {
    throw UsageError("double_slit: slit_width too narrow for dx (momentum content not band-limited)");
  }
  const auto pot = Potential::zero(grid);
  const double dt = units.planck_time();
  const auto steps = static_cast<std::uint64_t>(std::llround(spec.screen_time / dt));
  if (steps < 1) throw UsageError("double_slit: screen_time shorter than one Planck time");

  const auto left = slit_packet(grid, -0.5 * spec.separation, spec.slit_width);
  const auto right = slit_packet(grid, 0.5 * spec.separation, spec.slit_width);
  std::vector<Complex> both(grid.size());
  for (std::size_t i = 0; i < both.size(); ++i) both[i] = left.amp[i] + right.amp[i];
  WaveFunction coherent(grid, std::move(both));
  coherent.normalize();

  auto evolve = [&](WaveFunction psi) {
    CrankNicolson cn(pot, units, PropagatorConfig{dt});
    for (std::uint64_t s = 0; s < steps; ++s) cn.step_in_place(psi);
    return psi;
  };

  DoubleSlitResult res;
  res.x.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) res.x[i] = grid.x(i);
  const auto dl = density(evolve(left));
  const auto dr = density(evolve(right));
  res.mixture.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) res.mixture[i] = 0.5 * (dl[i] + dr[i]);

  if (!collapse_on) {
    res.pattern = density(evolve(coherent));
  } else {
    if (n_traj < 1) throw UsageError("double_slit: collapse_on needs n_traj >= 1");
    CollapseConfig cfg = cfg_in;
    cfg.cell_width = grid.size() / 2;
    cfg.validate(grid);
    std::vector<std::vector<double>> per_traj(n_traj);
    parallel_for(n_traj, threads, [&](std::size_t t) {
      CollapseEvolver evolver(pot, units, cfg);
      CounterRng rng(cfg.seed, t);
      CrankNicolson linear(pot, units, PropagatorConfig{dt});
      WaveFunction psi = coherent;
      bool collapsed = false;
      for (std::uint64_t s = 0; s < steps; ++s) {
        // Once one branch holds 1 - eps of the measure there is no second
        // branch left to differ in energy from; evolution is linear from here.
        if (collapsed) {
          linear.step_in_place(psi);
          continue;
        }
        evolver.advance(psi, rng);
        collapsed = detect_collapse(psi, cfg).has_value();
      }
      per_traj[t] = density(psi);
    });
    res.pattern.assign(grid.size(), 0.0);
    for (const auto& d : per_traj) {
      for (std::size_t i = 0; i < d.size(); ++i) res.pattern[i] += d[i];
    }
    for (auto& v : res.pattern) v /= static_cast<double>(n_traj);
    res.n_traj = n_traj;
  }

  const double fringe = 2.0 * std::numbers::pi * units.hbar() * spec.screen_time / (units.mass() * spec.separation);
  res.window_half_width = 0.55 * fringe;
  res.visibility_pattern = visibility(res.x, res.pattern, res.window_half_width);
  res.visibility_mixture = visibility(res.x, res.mixture, res.window_half_width);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = std::abs(res.pattern[i] - res.mixture[i]);
    res.max_pointwise_diff = std::max(res.max_pointwise_diff, d);
    res.l1_distance += d * spec.dx;
  }
  return res;
}

}  // namespace dstc
