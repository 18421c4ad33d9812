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

#include "dstc/collapse.hpp"

#include <cmath>
#include <span>
#include <string>

#include "dstc/error.hpp"

namespace dstc {

void CollapseConfig::validate(const LatticeGrid& grid) const {
  if (!(k > 0.0) || !std::isfinite(k)) throw UsageError("collapse: k must be positive");
  if (cell_width < 1) throw UsageError("collapse: cell_width must be at least 1");
  if (grid.size() % cell_width != 0) {
    throw UsageError("collapse: n_cells (" + std::to_string(grid.size()) + ") not divisible by cell_width (" +
                     std::to_string(cell_width) + ")");
  }
  if (!(eps > 0.0 && eps < 0.5)) throw UsageError("collapse: eps must lie in (0, 0.5)");
  if (rate && !(*rate >= 0.0 && std::isfinite(*rate))) throw UsageError("collapse: rate must be non-negative");
}


std::size_t sample_cell(std::span<const double> measures, double u) {
  double total = 0.0;
  for (double m : measures) total += m;
  const double target = u * total;
  double cum = 0.0;
  for (std::size_t c = 0; c < measures.size(); ++c) {
    cum += measures[c];
    if (target < cum) return c;
  }
  // u * total rounded up to total: last cell with positive measure.
  for (std::size_t c = measures.size(); c-- > 0;) {
    if (measures[c] > 0.0) return c;
  }
  return 0;
}

namespace {

// rho_i e_i equals Re(conj(psi_i) (H psi)_i), so the local-energy field is
// never materialised.
double delta_E_from(const WaveFunction& psi, std::span<const Complex> h, std::size_t cell, std::size_t w) {
  const std::size_t n = psi.grid.size();
  const double floor = psi.grid.rho_floor();
  double in_rho = 0.0, in_weight = 0.0, in_energy = 0.0;
  double out_rho = 0.0, out_weight = 0.0, out_energy = 0.0;
  const std::size_t begin = cell * w, end = begin + w;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = std::norm(psi.amp[i]);
    const bool inside = i >= begin && i < end;
    (inside ? in_rho : out_rho) += rho;
    if (!(rho > floor)) continue;
    (inside ? in_weight : out_weight) += rho;
    (inside ? in_energy : out_energy) += std::real(std::conj(psi.amp[i]) * h[i]);
  }
  const double side_floor = floor * static_cast<double>(w);
  if (!(in_rho > side_floor) || !(out_rho > side_floor)) return 0.0;
  if (!(in_weight > 0.0) || !(out_weight > 0.0)) return 0.0;
  return std::abs(in_energy / in_weight - out_energy / out_weight);
}

void cell_measures_into(const WaveFunction& psi, std::size_t w, std::vector<double>& m) {
  const std::size_t cells = psi.grid.size() / w;
  m.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    double s = 0.0;
    for (std::size_t i = c * w; i < (c + 1) * w; ++i) s += std::norm(psi.amp[i]);
    m[c] = s * psi.grid.dx();
  }
}

}  // namespace

std::vector<double> cell_measures(const WaveFunction& psi, std::size_t cell_width) {
  std::vector<double> m;
  cell_measures_into(psi, cell_width, m);
  return m;
}

StayEvent sample_stay_cell(const WaveFunction& psi, const CollapseConfig& cfg, CounterRng& rng) {
  const auto m = cell_measures(psi, cfg.cell_width);
  return {sample_cell(m, rng.uniform()), psi.time, 0.0};
}


double delta_E(const WaveFunction& psi, const Potential& pot, std::size_t cell, const UnitSystem& units,
               const CollapseConfig& cfg) {
  if ((cell + 1) * cfg.cell_width > psi.grid.size()) throw UsageError("delta_E: cell index out of range");
  std::vector<Complex> h;
  apply_hamiltonian_into(psi, pot, units, h);
  return delta_E_from(psi, h, cell, cfg.cell_width);
}

double measure_update(double rho_cell, double dE, double T, const UnitSystem& units, const CollapseConfig& cfg) {
  if (!(rho_cell >= 0.0 && rho_cell <= 1.0)) throw DomainError("measure_update: rho must lie in [0, 1]");
  if (!(dE >= 0.0)) throw DomainError("measure_update: dE must be non-negative");
  if (!(T > 0.0)) throw DomainError("measure_update: T must be positive");
  const double r = T * dE / (cfg.k * units.hbar());
  if (std::isinf(r)) return 1.0;
  return (rho_cell + r) / (1.0 + r);
}

double collapse_fraction(double dE, const UnitSystem& units, const CollapseConfig& cfg) {
  const double r = cfg.rate ? *cfg.rate : dE / (cfg.k * units.planck_energy());
  if (std::isinf(r)) return 1.0;
  return r / (1.0 + r);
}

CollapseEvolver::CollapseEvolver(const Potential& pot, const UnitSystem& units, const CollapseConfig& cfg)
    : pot_(pot), units_(units), cfg_(cfg), linear_(pot, units, PropagatorConfig{units.planck_time()}) {
  cfg_.validate(pot.grid);
}

StayEvent CollapseEvolver::advance(WaveFunction& psi, CounterRng& rng) {
  linear_.step_in_place(psi);

  const std::size_t w = cfg_.cell_width;
  cell_measures_into(psi, w, before_);
  StayEvent event{sample_cell(before_, rng.uniform()), psi.time, 0.0};

  double r = 0.0;
  if (cfg_.rate) {
    r = *cfg_.rate;
    event.delta_E = r * cfg_.k * units_.planck_energy();
  } else {
    apply_hamiltonian_into(psi, pot_, units_, h_);
    event.delta_E = delta_E_from(psi, h_, event.cell_index, w);
    r = event.delta_E / (cfg_.k * units_.planck_energy());
  }

  const double rho_old = before_[event.cell_index];
  if (r > 0.0 && rho_old > 0.0) {
    const double rho_new = std::isinf(r) ? 1.0 : (rho_old + r) / (1.0 + r);
    const double stay_scale = std::sqrt(rho_new / rho_old);
    const double other_scale = std::isinf(r) ? 0.0 : std::sqrt(1.0 / (1.0 + r));
    const std::size_t begin = event.cell_index * w;
    for (std::size_t i = 0; i < psi.amp.size(); ++i) {
      psi.amp[i] *= (i >= begin && i < begin + w) ? stay_scale : other_scale;
    }
  }
  psi.normalize();
  cell_measures_into(psi, w, after_);
  return event;
}

std::optional<std::size_t> CollapseEvolver::collapsed_cell() const noexcept {
  for (std::size_t c = 0; c < after_.size(); ++c) {
    if (after_[c] >= 1.0 - cfg_.eps) return c;
  }
  return std::nullopt;
}

WaveFunction stochastic_step(const WaveFunction& psi, const Potential& pot, const UnitSystem& units,
                             const CollapseConfig& cfg, CounterRng& rng, StayEvent* event) {
  require_normalized(psi, "stochastic_step");
  require_same_grid(psi.grid, pot.grid, "stochastic_step");
  CollapseEvolver evolver(pot, units, cfg);
  WaveFunction out = psi;
  const auto ev = evolver.advance(out, rng);
  if (event) *event = ev;
  return out;
}

std::optional<CollapseDetection> detect_collapse(const WaveFunction& psi, const CollapseConfig& cfg) {
  const auto m = cell_measures(psi, cfg.cell_width);
  for (std::size_t c = 0; c < m.size(); ++c) {
    if (m[c] >= 1.0 - cfg.eps) return CollapseDetection{c, psi.time};
  }
  return std::nullopt;
}

}  // namespace dstc
