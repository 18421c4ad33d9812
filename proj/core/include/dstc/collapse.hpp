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
#include <optional>
#include <span>
#include <vector>

#include "dstc/grid.hpp"
#include "dstc/rng.hpp"
#include "dstc/schrodinger.hpp"
#include "dstc/units.hpp"

namespace dstc {

// Parameters of the discrete space-time collapse dynamics. The Planck energy
// and time come from the UnitSystem passed alongside; the lattice is
// partitioned into "Planck cells" of `cell_width` consecutive lattice cells.
struct CollapseConfig {
  double k = 1.0;
  std::size_t cell_width = 1;
  double eps = 1e-3;
  std::uint64_t seed = 0;
  // When set, r = dE / (k E_p) is fixed to this value and the state-dependent
  // energy difference is not computed.
  std::optional<double> rate;

  // Throws UsageError unless k > 0, w >= 1, n_cells % w == 0, 0 < eps < 0.5, rate >= 0.
  void validate(const LatticeGrid& grid) const;
  std::size_t n_planck_cells(const LatticeGrid& grid) const { return grid.size() / cell_width; }
};

struct StayEvent {
  std::size_t cell_index = 0;
  double drawn_at = 0.0;
  double delta_E = 0.0;
};

// Measure of each Planck cell: sum over its lattice cells of |psi|^2 dx.
std::vector<double> cell_measures(const WaveFunction& psi, std::size_t cell_width);

// Inverse CDF: smallest c with u * total < measures[0] + ... + measures[c].
std::size_t sample_cell(std::span<const double> measures, double u);

// Draws the stay cell with probability equal to its measure, using exactly
// one uniform from `rng`. delta_E of the returned event is left at zero.
StayEvent sample_stay_cell(const WaveFunction& psi, const CollapseConfig& cfg, CounterRng& rng);

// |<e>_cell - <e>_complement| with rho-weighted averages of the local energy
// density over defined cells. Zero when either side carries negligible measure
// or has no defined cells.
double delta_E(const WaveFunction& psi, const Potential& pot, std::size_t cell, const UnitSystem& units,
               const CollapseConfig& cfg);

// Stay-cell measure after dwelling for T: (rho + r) / (1 + r), r = T dE / (k hbar).
// Every other cell scales by 1 / (1 + r). Throws DomainError on negative
// inputs, rho outside [0, 1] or T <= 0.
double measure_update(double rho_cell, double dE, double T, const UnitSystem& units, const CollapseConfig& cfg);

// lambda = dE / (k E_p + dE), the fraction of the missing measure a stay cell
// gains per Planck time. Honors cfg.rate.
double collapse_fraction(double dE, const UnitSystem& units, const CollapseConfig& cfg);

// Drives repeated stochastic steps on one trajectory with a cached linear
// propagator (dt = T_p). One instance per thread.
class CollapseEvolver {
 public:
  CollapseEvolver(const Potential& pot, const UnitSystem& units, const CollapseConfig& cfg);

  // Linear sub-step, stay-cell draw, energy difference, measure update and
  // renormalization, in that order.
  StayEvent advance(WaveFunction& psi, CounterRng& rng);

  const CollapseConfig& config() const noexcept { return cfg_; }
  const UnitSystem& units() const noexcept { return units_; }
  // Planck-cell measures of the state left by the last advance().
  const std::vector<double>& measures() const noexcept { return after_; }
  // The cell holding at least 1 - eps after the last advance(), if any.
  std::optional<std::size_t> collapsed_cell() const noexcept;

 private:
  Potential pot_;
  UnitSystem units_;
  CollapseConfig cfg_;
  CrankNicolson linear_;
  std::vector<double> before_, after_;
  std::vector<Complex> h_;
};

WaveFunction stochastic_step(const WaveFunction& psi, const Potential& pot, const UnitSystem& units,
                             const CollapseConfig& cfg, CounterRng& rng, StayEvent* event = nullptr);

struct CollapseDetection {
  std::size_t cell;
  double time;
};

// The Planck cell holding at least 1 - eps of the measure, if any.
std::optional<CollapseDetection> detect_collapse(const WaveFunction& psi, const CollapseConfig& cfg);

}  // namespace dstc
