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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dstc/collapse.hpp"
#include "dstc/grid.hpp"
#include "dstc/schrodinger.hpp"
#include "dstc/two_level.hpp"
#include "dstc/units.hpp"

namespace dstc {

struct EnsembleOptions {
  std::size_t n_traj = 1;
  double t_max = 0.0;
  unsigned threads = 1;
  // The first `logged_trajectories` trajectories keep a row every `log_stride` steps.
  std::size_t logged_trajectories = 0;
  std::size_t log_stride = 1;
};

struct TrajectoryRow {
  double t;
  std::vector<double> cell_measures;
  std::size_t stay_cell;
  double delta_E;
};

struct TrajectoryLog {
  std::size_t index = 0;
  std::vector<TrajectoryRow> rows;
};

struct EnsembleResult {
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> counts;       // collapses per Planck cell
  std::vector<double> histogram;         // counts / n_traj
  std::vector<double> collapse_times;    // absorbed trajectories, in trajectory order
  std::size_t unabsorbed = 0;
  std::string config_echo;               // JSON object
  std::vector<TrajectoryLog> logs;

  double unabsorbed_fraction() const noexcept {
    return n_traj ? static_cast<double>(unabsorbed) / static_cast<double>(n_traj) : 0.0;
  }
  double mean_collapse_time() const noexcept;
};

// Runs n_traj independent stochastic trajectories from psi0 until each either
// collapses (detect_collapse) or reaches t_max. Trajectory i draws from
// CounterRng(cfg.seed, i); results are reduced in trajectory order, so the
// output is identical for every thread count.
EnsembleResult run_ensemble(const WaveFunction& psi0, const Potential& pot, const UnitSystem& units,
                            const CollapseConfig& cfg, const EnsembleOptions& opts);

std::string to_json(const EnsembleResult& result);
// One CSV: t, m0..m{K-1}, stay_cell, dE.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

// ---------------------------------------------------------------------------
// Expectation values and the Ehrenfest check

struct Observables {
  double t = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double mean_force = 0.0;  // <-dU/dx>
};

// <p> = m sum j dx with the central-difference current; <p^2> from forward
// differences, i.e. 2m times the lattice kinetic energy.
Observables observables(const WaveFunction& psi, const Potential& pot, const UnitSystem& units);

struct EhrenfestReport {
  std::vector<Observables> series;
  // Interior snapshots: finite-difference derivatives and their classical counterparts.
  std::vector<double> dxdt, velocity, dpdt, force;
  double max_rel_residual_x = 0.0;  // relative to max |<p>/m|
  double max_rel_residual_p = 0.0;  // relative to max |<-dU/dx>| (absolute when that is zero)
};

// Snapshots must be uniformly spaced in time; fewer than three throw UsageError.
EhrenfestReport ehrenfest_track(std::span<const WaveFunction> snapshots, const Potential& pot,
                                const UnitSystem& units);

// ---------------------------------------------------------------------------
// Two stationary states in separate regions of one dirichlet lattice

struct TwoRegionSpec {
  std::size_t region_cells = 30;
  std::size_t barrier_cells = 4;  // even, so the two halves split at the barrier centre
  double dx = 1.0;
  double barrier_height = 50.0;
  double dE = 1.0;  // potential offset of region 2
};

struct TwoRegionSystem {
  LatticeGrid grid;
  Potential potential;
  WaveFunction state1;  // localized in the left half
  WaveFunction state2;  // localized in the right half
  double E1;
  double E2;
  std::size_t cell_width;  // half the lattice: Planck cell 0 covers region 1

  // sqrt(alpha) state1 + sqrt(1 - alpha) state2
  WaveFunction superpose(double alpha) const;
};

TwoRegionSystem make_two_region_system(const TwoRegionSpec& spec, const UnitSystem& units);

// Two isolated sites (large dx makes the hopping negligible against dE).
TwoRegionSystem make_two_site_system(double dE, const UnitSystem& units);

struct TwoLevelSample {
  double rho = 0.0;  // measure of Planck cell 0
  Complex c1{};      // <state1(t)|psi>, with state1 evolved linearly
  Complex c2{};
};

struct DensityEstimate {
  DensityMatrix2 matrix;
  std::size_t n = 0;
  std::optional<std::string> warning;
};

// rho_11 = E[rho], rho_22 = 1 - rho_11, rho_12 = E[sqrt(rho (1 - rho)) exp(i theta)]
// with theta = arg c1 - arg c2. Fewer than 100 samples attach a warning.
DensityEstimate estimate_density_matrix(std::span<const TwoLevelSample> samples);

// Runs collapse trajectories on a two-region system and samples every
// trajectory at the given step counts. samples[r][i] belongs to trajectory i
// at record_steps[r]. A trajectory that reaches 1 - eps in one cell evolves
// linearly from then on, as in run_ensemble.
std::vector<std::vector<TwoLevelSample>> sample_two_region_trajectories(
    const TwoRegionSystem& system, double alpha, const UnitSystem& units, const CollapseConfig& cfg,
    std::size_t n_traj, const std::vector<std::uint64_t>& record_steps, unsigned threads = 1);

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace dstc
