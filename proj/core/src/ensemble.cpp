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

#include "dstc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "dstc/error.hpp"
#include "dstc/io.hpp"
#include "dstc/parallel.hpp"
#include "json.hpp"

namespace dstc {

using nlohmann::json;

double EnsembleResult::mean_collapse_time() const noexcept {
  if (collapse_times.empty()) return 0.0;
  double s = 0.0;
  for (double t : collapse_times) s += t;
  return s / static_cast<double>(collapse_times.size());
}

namespace {

std::uint64_t step_count(double t_max, double dt) {
  return static_cast<std::uint64_t>(std::ceil(t_max / dt * (1.0 - 1e-12)));
}

struct TrajectoryOutcome {
  bool absorbed = false;
  std::size_t cell = 0;
  double time = 0.0;
};

}  // namespace

EnsembleResult run_ensemble(const WaveFunction& psi0, const Potential& pot, const UnitSystem& units,
                            const CollapseConfig& cfg, const EnsembleOptions& opts) {
  require_normalized(psi0, "run_ensemble");
  require_same_grid(psi0.grid, pot.grid, "run_ensemble");
  cfg.validate(psi0.grid);
  if (opts.n_traj < 1) throw UsageError("run_ensemble: n_traj must be at least 1");
  if (!(opts.t_max > 0.0)) throw UsageError("run_ensemble: t_max must be positive");
  if (opts.log_stride < 1) throw UsageError("run_ensemble: log_stride must be at least 1");

  const std::uint64_t max_steps = step_count(opts.t_max, units.planck_time());
  const std::size_t n_logged = std::min(opts.logged_trajectories, opts.n_traj);
  std::vector<TrajectoryOutcome> outcomes(opts.n_traj);
  std::vector<TrajectoryLog> logs(n_logged);

  parallel_for(opts.n_traj, opts.threads, [&](std::size_t i) {
    CollapseEvolver evolver(pot, units, cfg);
    CounterRng rng(cfg.seed, i);
    WaveFunction psi = psi0;
    TrajectoryLog* log = i < n_logged ? &logs[i] : nullptr;
    if (log) {
      log->index = i;
      log->rows.push_back({psi.time, cell_measures(psi, cfg.cell_width), 0, 0.0});
    }
    auto& out = outcomes[i];
    if (auto hit = detect_collapse(psi, cfg)) {
      out = {true, hit->cell, hit->time};
      return;
    }
    for (std::uint64_t s = 1; s <= max_steps; ++s) {
      const auto ev = evolver.advance(psi, rng);
      const auto hit = evolver.collapsed_cell();
      if (log && (s % opts.log_stride == 0 || hit || s == max_steps)) {
        log->rows.push_back({psi.time, evolver.measures(), ev.cell_index, ev.delta_E});
      }
      if (hit) {
        out = {true, *hit, psi.time};
        return;
      }
    }
  });

  EnsembleResult res;
  res.n_traj = opts.n_traj;
  res.seed = cfg.seed;
  const std::size_t cells = cfg.n_planck_cells(psi0.grid);
  res.counts.assign(cells, 0);
  for (const auto& o : outcomes) {
    if (!o.absorbed) {
      ++res.unabsorbed;
      continue;
    }
    ++res.counts[o.cell];
    res.collapse_times.push_back(o.time);
  }
  res.histogram.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    res.histogram[c] = static_cast<double>(res.counts[c]) / static_cast<double>(opts.n_traj);
  }
  res.logs = std::move(logs);

  json echo = {{"units", json::parse(units_json(units))},
               {"grid",
                {{"n_cells", psi0.grid.size()},
                 {"dx", psi0.grid.dx()},
                 {"x_min", psi0.grid.x_min()},
                 {"boundary", to_string(psi0.grid.boundary())}}},
               {"collapse",
                {{"k", cfg.k}, {"cell_width", cfg.cell_width}, {"eps", cfg.eps}, {"seed", cfg.seed}}},
               {"n_traj", opts.n_traj},
               {"t_max", opts.t_max}};
  if (cfg.rate) echo["collapse"]["rate"] = *cfg.rate;
  res.config_echo = echo.dump();
  return res;
}

std::string to_json(const EnsembleResult& r) {
  double mean = r.mean_collapse_time();
  double var = 0.0;
  for (double t : r.collapse_times) var += (t - mean) * (t - mean);
  if (r.collapse_times.size() > 1) var /= static_cast<double>(r.collapse_times.size() - 1);
  const double n = static_cast<double>(r.n_traj);
  const double f0 = r.histogram.empty() ? 0.0 : r.histogram[0];
  json j = {{"n_traj", r.n_traj},
            {"seed", r.seed},
            {"counts", r.counts},
            {"histogram", r.histogram},
            {"absorption_freq", f0},
            {"ci95", 1.96 * std::sqrt(f0 * (1.0 - f0) / n)},
            {"unabsorbed", r.unabsorbed},
            {"collapse_time_mean", mean},
            {"collapse_time_std", std::sqrt(var)},
            {"collapse_times", r.collapse_times},
            {"config", r.config_echo.empty() ? json::object() : json::parse(r.config_echo)}};
  return j.dump(2);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  const std::size_t cells = log.rows.empty() ? 0 : log.rows.front().cell_measures.size();
  out << "t";
  for (std::size_t c = 0; c < cells; ++c) out << ",m" << c;
  out << ",stay_cell,dE\n";
  for (const auto& row : log.rows) {
    out << format_double(row.t);
    for (double m : row.cell_measures) out << ',' << format_double(m);
    out << ',' << row.stay_cell << ',' << format_double(row.delta_E) << '\n';
  }
}

// ---------------------------------------------------------------------------

Observables observables(const WaveFunction& psi, const Potential& pot, const UnitSystem& units) {
  const auto& g = psi.grid;
  const std::size_t n = g.size();
  const double dx = g.dx();
  const auto mf = extract_measures(psi, units);
  const double s = pot.scale(psi.time);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = s * pot.u[i];
  const auto du = derivative(g, std::span<const double>(u));

  Observables o;
  o.t = psi.time;
  double x2 = 0.0, p2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.x(i);
    o.mean_x += x * mf.rho[i];
    x2 += x * x * mf.rho[i];
    o.mean_p += mf.flux[i];
    o.mean_force -= mf.rho[i] * du[i];
    const Complex next = i + 1 < n ? psi.amp[i + 1] : (g.periodic() ? psi.amp[0] : Complex{});
    p2 += std::norm(next - psi.amp[i]);
  }
  if (!g.periodic()) p2 += std::norm(psi.amp[0]);  // zero cell at -1
  o.mean_x *= dx;
  x2 *= dx;
  o.mean_p *= units.mass() * dx;
  o.mean_force *= dx;
  const double hbar = units.hbar();
  p2 *= hbar * hbar / dx;
  o.var_x = std::max(0.0, x2 - o.mean_x * o.mean_x);
  o.var_p = std::max(0.0, p2 - o.mean_p * o.mean_p);
  return o;
}

EhrenfestReport ehrenfest_track(std::span<const WaveFunction> snapshots, const Potential& pot,
                                const UnitSystem& units) {
  if (snapshots.size() < 3) throw UsageError("ehrenfest_track: need at least 3 snapshots");
  const double h = snapshots[1].time - snapshots[0].time;
  if (!(h > 0.0)) throw UsageError("ehrenfest_track: snapshots must advance in time");
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    const double gap = snapshots[i].time - snapshots[i - 1].time;
    if (std::abs(gap - h) > 1e-9 * std::abs(h)) throw UsageError("ehrenfest_track: snapshots not uniformly spaced");
  }
  EhrenfestReport rep;
  for (const auto& psi : snapshots) rep.series.push_back(observables(psi, pot, units));

  double vmax = 0.0, fmax = 0.0;
  for (std::size_t i = 1; i + 1 < rep.series.size(); ++i) {
    const auto& prev = rep.series[i - 1];
    const auto& next = rep.series[i + 1];
    rep.dxdt.push_back((next.mean_x - prev.mean_x) / (2.0 * h));
    rep.velocity.push_back(rep.series[i].mean_p / units.mass());
    rep.dpdt.push_back((next.mean_p - prev.mean_p) / (2.0 * h));
    rep.force.push_back(rep.series[i].mean_force);
    vmax = std::max(vmax, std::abs(rep.velocity.back()));
    fmax = std::max(fmax, std::abs(rep.force.back()));
  }
  for (std::size_t i = 0; i < rep.dxdt.size(); ++i) {
    const double rx = std::abs(rep.dxdt[i] - rep.velocity[i]);
    const double rp = std::abs(rep.dpdt[i] - rep.force[i]);
    rep.max_rel_residual_x = std::max(rep.max_rel_residual_x, vmax > 0.0 ? rx / vmax : rx);
    rep.max_rel_residual_p = std::max(rep.max_rel_residual_p, fmax > 0.0 ? rp / fmax : rp);
  }
  return rep;
}

// ---------------------------------------------------------------------------

WaveFunction TwoRegionSystem::superpose(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("superpose: alpha must lie in [0, 1]");
  std::vector<Complex> amp(grid.size());
  const double a = std::sqrt(alpha), b = std::sqrt(1.0 - alpha);
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = a * state1.amp[i] + b * state2.amp[i];
  WaveFunction psi(grid, std::move(amp));
  psi.normalize();
  return psi;
}

TwoRegionSystem make_two_region_system(const TwoRegionSpec& spec, const UnitSystem& units) {
  if (spec.region_cells < 1) throw UsageError("two-region system: region_cells must be at least 1");
  if (spec.barrier_cells % 2 != 0) throw UsageError("two-region system: barrier_cells must be even");
  if (!(spec.dE > 0.0)) throw UsageError("two-region system: dE must be positive");
  const std::size_t m = spec.region_cells;
  const std::size_t n = 2 * m + spec.barrier_cells;
  LatticeGrid grid(n, spec.dx, 0.0, Boundary::kDirichlet);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = m; i < m + spec.barrier_cells; ++i) u[i] = spec.barrier_height;
  for (std::size_t i = m + spec.barrier_cells; i < n; ++i) u[i] = spec.dE;
  Potential pot(grid, u);

  // Ground level of an isolated m-cell box.
  const double kin = units.hbar() * units.hbar() / (units.mass() * spec.dx * spec.dx);
  const double box = kin * (1.0 - std::cos(std::numbers::pi / static_cast<double>(m + 1)));
  auto e1 = nearest_eigenstate(pot, units, box);
  auto e2 = nearest_eigenstate(pot, units, box + spec.dE);
  return TwoRegionSystem{grid, pot, std::move(e1.state), std::move(e2.state), e1.energy, e2.energy, n / 2};
}

TwoRegionSystem make_two_site_system(double dE, const UnitSystem& units) {
  // Hopping hbar^2 / (2 m dx^2) = 1e-6 dE.
  const double dx = std::sqrt(units.hbar() * units.hbar() / (2.0 * units.mass() * 1e-6 * dE));
  return make_two_region_system({1, 0, dx, 0.0, dE}, units);
}

DensityEstimate estimate_density_matrix(std::span<const TwoLevelSample> samples) {
  DensityEstimate out;
  out.n = samples.size();
  if (samples.empty()) throw UsageError("estimate_density_matrix: no samples");
  double rho11 = 0.0;
  Complex rho12{0.0, 0.0};
  for (const auto& s : samples) {
    rho11 += s.rho;
    double theta = 0.0;
    if (std::abs(s.c1) > 0.0 && std::abs(s.c2) > 0.0) theta = std::arg(s.c1) - std::arg(s.c2);
    rho12 += std::polar(std::sqrt(std::max(0.0, s.rho * (1.0 - s.rho))), theta);
  }
  const double n = static_cast<double>(samples.size());
  rho11 /= n;
  rho12 /= n;
  out.matrix.m[0][0] = rho11;
  out.matrix.m[1][1] = 1.0 - rho11;
  out.matrix.m[0][1] = rho12;
  out.matrix.m[1][0] = std::conj(rho12);
  if (samples.size() < 100) {
    out.warning = "low statistics: " + std::to_string(samples.size()) + " trajectories (< 100)";
  }
  return out;
}

std::vector<std::vector<TwoLevelSample>> sample_two_region_trajectories(
    const TwoRegionSystem& system, double alpha, const UnitSystem& units, const CollapseConfig& cfg_in,
    std::size_t n_traj, const std::vector<std::uint64_t>& record_steps, unsigned threads) {
  if (!std::is_sorted(record_steps.begin(), record_steps.end())) {
    throw UsageError("sample_two_region_trajectories: record steps must be ascending");
  }
  CollapseConfig cfg = cfg_in;
  cfg.cell_width = system.cell_width;
  const WaveFunction psi0 = system.superpose(alpha);
  const double dt = units.planck_time();
  const double phase1 = crank_nicolson_phase(system.E1, dt, units.hbar());
  const double phase2 = crank_nicolson_phase(system.E2, dt, units.hbar());
  const std::size_t nr = record_steps.size();
  std::vector<std::vector<TwoLevelSample>> out(nr, std::vector<TwoLevelSample>(n_traj));

  parallel_for(n_traj, threads, [&](std::size_t i) {
    CollapseEvolver evolver(system.potential, units, cfg);
    CrankNicolson linear(system.potential, units, PropagatorConfig{dt});
    CounterRng rng(cfg.seed, i);
    WaveFunction psi = psi0;
    bool collapsed = detect_collapse(psi, cfg).has_value();
    std::uint64_t s = 0;
    for (std::size_t r = 0; r < nr; ++r) {
      for (; s < record_steps[r]; ++s) {
        if (collapsed) {
          linear.step_in_place(psi);
          continue;
        }
        evolver.advance(psi, rng);
        collapsed = evolver.collapsed_cell().has_value();
      }
      const double steps = static_cast<double>(s);
      const double rho0 = cell_measures(psi, cfg.cell_width)[0];
      // Linearly evolved basis: exact eigenvectors only pick up the CN phase.
      const Complex b1 = std::polar(1.0, -phase1 * steps);
      const Complex b2 = std::polar(1.0, -phase2 * steps);
      auto& sample = out[r][i];
      sample.rho = rho0;
      sample.c1 = b1 * inner_product(system.state1, psi);
      sample.c2 = b2 * inner_product(system.state2, psi);
    }
  });
  return out;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw UsageError("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace dstc
