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


#include "dstc_app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dstc/collapse.hpp"
#include "dstc/double_slit.hpp"
#include "dstc/ensemble.hpp"
#include "dstc/error.hpp"
#include "dstc/io.hpp"
#include "dstc/rng.hpp"
#include "dstc/schrodinger.hpp"
#include "dstc/spectral.hpp"
#include "dstc/two_level.hpp"

namespace dstc::app {
namespace {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v) { return format_double(v); }

CollapseConfig collapse_config(const RunConfig& cfg) {
  CollapseConfig c;
  c.k = cfg.positive("collapse.k");
  c.cell_width = cfg.count("collapse.cell_width");
  c.eps = cfg.real("collapse.eps");
  if (!(c.eps > 0.0 && c.eps < 0.5)) throw UsageError("config field 'collapse.eps': must lie in (0, 0.5)");
  c.seed = cfg.seed();
  if (const auto r = cfg.real_or("collapse.rate", "none")) {
    if (*r < 0.0) throw UsageError("config field 'collapse.rate': must be non-negative");
    c.rate = *r;
  }
  return c;
}

double unit_interval(const RunConfig& cfg, std::string_view key) {
  const double v = cfg.real(key);
  if (!(v >= 0.0 && v <= 1.0)) throw UsageError("config field '" + std::string(key) + "': must lie in [0, 1]");
  return v;
}

Potential potential(const RunConfig& cfg, const LatticeGrid& grid, const UnitSystem& units) {
  try {
    return make_potential(cfg.raw("potential.preset"), grid, units);
  } catch (const UsageError& e) {
    throw UsageError(std::string("config field 'potential.preset': ") + e.what());
  }
}

WaveFunction initial_state(const RunConfig& cfg, const Potential& pot, const UnitSystem& units) {
  const auto& grid = pot.grid;
  const auto& kind = cfg.raw("state.kind");
  if (kind == "gaussian") {
    return gaussian_packet(grid, cfg.real("state.x0"), cfg.positive("state.sigma"), cfg.real("state.p0"),
                           units.hbar());
  }
  if (kind == "eigenstate") return nearest_eigenstate(pot, units, cfg.real("state.shift")).state;
  if (kind == "coherent") {
    // Eigenstate translated by a whole number of cells.
    const auto ground = nearest_eigenstate(pot, units, cfg.real("state.shift")).state;
    const auto shift = static_cast<long long>(std::llround(cfg.real("state.x0") / grid.dx()));
    const auto n = static_cast<long long>(grid.size());
    std::vector<Complex> amp(grid.size(), Complex{});
    for (long long i = 0; i < n; ++i) {
      long long j = i + shift;
      if (grid.periodic()) j = ((j % n) + n) % n;
      if (j >= 0 && j < n) amp[static_cast<std::size_t>(j)] = ground.amp[static_cast<std::size_t>(i)];
    }
    WaveFunction psi(grid, std::move(amp));
    psi.normalize();
    return psi;
  }
  throw UsageError("config field 'state.kind': expected gaussian, eigenstate or coherent, got '" + kind + "'");
}

double free_width(double sigma0, double t, const UnitSystem& units) {
  const double a = units.hbar() * t / (2.0 * units.mass() * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + a * a);
}

}  // namespace

// ---------------------------------------------------------------------------

CommandOutput cmd_evolve(const RunConfig& cfg, unsigned) {
  const auto units = cfg.units();
  const auto grid = cfg.grid();
  const auto pot = potential(cfg, grid, units);
  const double dt = cfg.real("evolve.dt");
  if (dt == 0.0) throw UsageError("config field 'evolve.dt': must be non-zero");
  const auto steps = cfg.count("evolve.steps");
  const auto stride = cfg.count("evolve.snapshot_stride");
  if (stride == 0) throw UsageError("config field 'evolve.snapshot_stride': must be at least 1");
  auto psi = initial_state(cfg, pot, units);

  const bool width_law = cfg.is("state.kind", "gaussian") && cfg.is("potential.preset", "free");
  const double sigma0 = width_law ? cfg.positive("state.sigma") : 0.0;

  std::ostringstream snaps, obs;
  snaps << cfg.csv_header() << "t,x,re_psi,im_psi\n";
  obs << cfg.csv_header() << "t,norm,mean_x,mean_p,var_x,var_p,energy" << (width_law ? ",width_analytic" : "")
      << "\n";
  const double e0 = energy_expectation(psi, pot, units);
  double max_width_err = 0.0, max_norm_drift = 0.0, max_energy_drift = 0.0;
  auto record = [&] {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      snaps << fmt(psi.time) << ',' << fmt(grid.x(i)) << ',' << fmt(psi.amp[i].real()) << ','
            << fmt(psi.amp[i].imag()) << '\n';
    }
    const auto o = observables(psi, pot, units);
    const double e = energy_expectation(psi, pot, units);
    const double n2 = psi.norm_squared();
    obs << fmt(psi.time) << ',' << fmt(n2) << ',' << fmt(o.mean_x) << ',' << fmt(o.mean_p) << ','
        << fmt(o.var_x) << ',' << fmt(o.var_p) << ',' << fmt(e);
    max_norm_drift = std::max(max_norm_drift, std::abs(n2 - 1.0));
    if (!pot.time_dependent()) {
      max_energy_drift = std::max(max_energy_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
    }
    if (width_law) {
      const double w = free_width(sigma0, psi.time, units);
      obs << ',' << fmt(w);
      max_width_err = std::max(max_width_err, std::abs(std::sqrt(o.var_x) - w) / w);
    }
    obs << '\n';
  };

  CrankNicolson cn(pot, units, {dt});
  record();
  for (std::uint64_t s = 1; s <= steps; ++s) {
    cn.step_in_place(psi);
    if (s % stride == 0 || s == steps) record();
  }

  CommandOutput out;
  out.summary = {{"command", "evolve"},
                 {"steps", steps},
                 {"final_time", psi.time},
                 {"max_norm_drift", max_norm_drift},
                 {"max_energy_drift", max_energy_drift},
                 {"config", cfg.echo()}};
  if (width_law) out.summary["max_width_rel_error"] = max_width_err;
  out.files = {{"snapshots.csv", snaps.str()}, {"observables.csv", obs.str()}, {"result.json", dump(out.summary)}};
  std::ostringstream text;
  text << "evolved " << steps << " steps to t = " << psi.time << "\nmax norm drift " << max_norm_drift
       << "\nmax energy drift " << max_energy_drift << "\n";
  if (width_law) text << "max width error vs free spreading law " << max_width_err << "\n";
  out.text = text.str();
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput cmd_collapse(const RunConfig& cfg, unsigned threads) {
  const auto units = cfg.units();
  auto cc = collapse_config(cfg);
  const auto& system = cfg.raw("collapse.system");

  std::optional<WaveFunction> psi0;
  std::optional<Potential> pot;
  std::optional<double> tau_c;
  if (system == "two-site" || system == "two-region") {
    const double alpha = unit_interval(cfg, "collapse.alpha");
    const double dE = cfg.energy("collapse.dE");
    if (!(dE > 0.0)) throw UsageError("config field 'collapse.dE': must be positive");
    TwoRegionSystem sys = [&] {
      if (system == "two-site") return make_two_site_system(dE, units);
      TwoRegionSpec spec;
      spec.dE = dE;
      return make_two_region_system(spec, units);
    }();
    cc.cell_width = sys.cell_width;
    psi0 = sys.superpose(alpha);
    pot = sys.potential;
    tau_c = collapse_time(dE, units, cc);
  } else if (system == "grid") {
    const auto grid = cfg.grid();
    pot = potential(cfg, grid, units);
    psi0 = initial_state(cfg, *pot, units);
  } else {
    throw UsageError("config field 'collapse.system': expected two-site, two-region or grid, got '" + system + "'");
  }
  cc.validate(psi0->grid);
  if (cc.rate) tau_c = *cc.rate > 0.0 ? std::optional(2.0 * units.planck_time() / (*cc.rate * *cc.rate)) : std::nullopt;

  EnsembleOptions opts;
  opts.n_traj = cfg.count("collapse.n_traj");
  if (opts.n_traj == 0) throw UsageError("config field 'collapse.n_traj': must be at least 1");
  if (const auto t = cfg.real_or("collapse.t_max", "auto")) {
    if (!(*t > 0.0)) throw UsageError("config field 'collapse.t_max': must be positive");
    opts.t_max = *t;
  } else if (tau_c) {
    opts.t_max = 100.0 * *tau_c;
  } else {
    throw UsageError("config field 'collapse.t_max': auto needs a finite collapse time; give collapse.rate or t_max");
  }
  opts.threads = threads;
  opts.logged_trajectories = std::min<std::uint64_t>(cfg.count("collapse.log_trajectories"), opts.n_traj);
  opts.log_stride = cfg.count("collapse.log_stride");
  if (opts.log_stride == 0) throw UsageError("config field 'collapse.log_stride': must be at least 1");

  auto res = run_ensemble(*psi0, *pot, units, cc, opts);
  res.config_echo = cfg.echo().dump();

  CommandOutput out;
  out.summary = json::parse(to_json(res));
  out.summary["command"] = "collapse";
  out.summary["tau_c_formula"] = tau_c ? json(*tau_c) : json("inf");
  out.summary["t_max"] = opts.t_max;
  out.files.push_back({"result.json", dump(out.summary)});
  for (const auto& log : res.logs) {
    std::ostringstream csv;
    csv << cfg.csv_header();
    write_trajectory_csv(csv, log);
    out.files.push_back({"trajectory_" + std::to_string(log.index) + ".csv", csv.str()});
  }
  std::ostringstream text;
  text << "trajectories " << res.n_traj << ", unabsorbed " << res.unabsorbed << "\n";
  text << "absorption_freq (cell 0) " << out.summary["absorption_freq"].get<double>() << " +- "
       << out.summary["ci95"].get<double>() << "\n";
  text << "mean collapse time " << out.summary["collapse_time_mean"].get<double>() << "\n";
  out.text = text.str();
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput cmd_twolevel(const RunConfig& cfg, unsigned threads) {
  const auto units = cfg.units();
  auto cc = collapse_config(cfg);
  cc.rate.reset();
  const double alpha0 = unit_interval(cfg, "twolevel.alpha0");
  const double dE = cfg.energy("twolevel.dE");
  const auto n_walks = cfg.count("twolevel.n_walks");
  const auto tau_c = collapse_time(dE, units, cc);
  const double lambda = collapse_fraction(dE, units, cc);
  double t = 0.0;
  if (const auto given = cfg.real_or("twolevel.t", "auto")) {
    if (*given < 0.0) throw UsageError("config field 'twolevel.t': must be non-negative");
    t = *given;
  } else if (tau_c) {
    t = 0.1 * *tau_c;
  }
  if (n_walks > 0 && dE > 0.0 && lambda < 1e-4) {
    throw UsageError("config field 'twolevel.n_walks': lambda = " + fmt(lambda) +
                     " needs ~1/lambda^2 steps per walk; set n_walks = 0");
  }

  CommandOutput out;
  json& j = out.summary;
  j = {{"command", "twolevel"},
       {"alpha0", alpha0},
       {"dE", dE},
       {"k", cc.k},
       {"planck_energy", units.planck_energy()},
       {"planck_time", units.planck_time()},
       {"r", dE / (cc.k * units.planck_energy())},
       {"lambda", lambda},
       {"tau_c_formula", tau_c ? json(*tau_c) : json("inf")}};

  const auto dm = density_matrix(TwoLevelState::pure(alpha0, 0.0, dE), t, units, cc);
  j["density_matrix"] = {{"t", t},
                         {"rho11", dm.m[0][0].real()},
                         {"rho22", dm.m[1][1].real()},
                         {"rho12_re", dm.m[0][1].real()},
                         {"rho12_im", dm.m[0][1].imag()},
                         {"trace", dm.trace()},
                         {"eigenvalues", dm.eigenvalues()}};
  if (dm.warning) j["density_matrix"]["warning"] = *dm.warning;

  if (n_walks == 0) {
    j["walks"] = "skipped: n_walks = 0";
  } else if (!(dE > 0.0)) {
    j["walks"] = "skipped: dE = 0 never collapses";
  } else {
    WalkOptions opts;
    opts.max_steps = cfg.count("twolevel.max_steps");
    opts.threads = threads;
    const auto a = absorption_probability(alpha0, dE, units, cc, n_walks, opts);
    j["walks"] = {{"n_walks", a.n_walks},
                  {"n_upper", a.n_upper},
                  {"n_lower", a.n_lower},
                  {"n_unterminated", a.n_unterminated},
                  {"absorption_freq", a.absorption_freq},
                  {"ci95", a.ci95},
                  {"mean_steps", a.mean_steps},
                  {"stddev_steps", a.stddev_steps},
                  {"mean_time", a.mean_steps * units.planck_time()}};
  }
  j["config"] = cfg.echo();
  out.files = {{"result.json", dump(j)}};

  std::ostringstream text;
  text << "lambda " << lambda << "\ntau_c " << (tau_c ? fmt(*tau_c) : std::string("inf")) << "\n";
  if (j["walks"].is_object()) {
    text << "absorption_freq " << j["walks"]["absorption_freq"].get<double>() << " +- "
         << j["walks"]["ci95"].get<double>() << "\n";
  }
  out.text = text.str();
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput cmd_doubleslit(const RunConfig& cfg, unsigned threads) {
  const auto units = cfg.units();
  auto cc = collapse_config(cfg);
  DoubleSlitSpec spec;
  spec.separation = cfg.positive("doubleslit.separation");
  spec.slit_width = cfg.positive("doubleslit.slit_width");
  spec.screen_time = cfg.positive("doubleslit.screen_time");
  spec.n_cells = cfg.count("doubleslit.n_cells");
  spec.dx = cfg.positive("doubleslit.dx");
  auto rates = cfg.real_list("doubleslit.rates");
  for (double r : rates) {
    if (!(r > 0.0)) throw UsageError("config field 'doubleslit.rates': rates must be positive");
  }
  std::sort(rates.begin(), rates.end());
  const auto n_traj = cfg.count("doubleslit.n_traj");
  if (n_traj == 0) throw UsageError("config field 'doubleslit.n_traj': must be at least 1");

  cc.rate.reset();
  const auto coherent = double_slit(spec, false, units, cc);
  std::vector<DoubleSlitResult> sweep;
  for (double r : rates) {
    cc.rate = r;
    sweep.push_back(double_slit(spec, true, units, cc, n_traj, threads));
  }
  bool monotone = coherent.l1_distance > (sweep.empty() ? 0.0 : sweep.front().l1_distance);
  for (std::size_t i = 1; i < sweep.size(); ++i) monotone = monotone && sweep[i].l1_distance < sweep[i - 1].l1_distance;

  CommandOutput out;
  json& j = out.summary;
  j = {{"command", "doubleslit"},
       {"visibility_coherent", coherent.visibility_pattern},
       {"visibility_mixture", coherent.visibility_mixture},
       {"window_half_width", coherent.window_half_width},
       {"l1_coherent", coherent.l1_distance},
       {"monotone_l1", monotone}};
  json rows = json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    rows.push_back({{"rate", rates[i]},
                    {"l1", sweep[i].l1_distance},
                    {"visibility", sweep[i].visibility_pattern},
                    {"max_pointwise_diff", sweep[i].max_pointwise_diff},
                    {"n_traj", sweep[i].n_traj}});
  }
  j["sweep"] = rows;
  j["config"] = cfg.echo();

  std::ostringstream csv;
  csv << cfg.csv_header() << "x,coherent,mixture";
  for (double r : rates) csv << ",r_" << fmt(r);
  csv << '\n';
  for (std::size_t i = 0; i < coherent.x.size(); ++i) {
    csv << fmt(coherent.x[i]) << ',' << fmt(coherent.pattern[i]) << ',' << fmt(coherent.mixture[i]);
    for (const auto& s : sweep) csv << ',' << fmt(s.pattern[i]);
    csv << '\n';
  }
  out.files = {{"pattern.csv", csv.str()}, {"result.json", dump(j)}};

  std::ostringstream text;
  text << "visibility coherent " << coherent.visibility_pattern << ", mixture " << coherent.visibility_mixture
       << "\nL1 to mixture: coherent " << coherent.l1_distance;
  for (std::size_t i = 0; i < sweep.size(); ++i) text << ", r=" << rates[i] << " " << sweep[i].l1_distance;
  text << "\nmonotone " << (monotone ? "yes" : "no") << "\n";
  out.text = text.str();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
  std::string detail;
};

}  // namespace

CommandOutput cmd_verify(const RunConfig& cfg, unsigned) {
  if (!cfg.is("units.mode", "scaled")) throw UsageError("config field 'units.mode': verify runs in scaled units");
  const auto units = cfg.units();
  const auto grid = cfg.grid();
  if (!grid.periodic()) throw UsageError("config field 'grid.boundary': verify needs a periodic grid");
  const double dt = cfg.positive("verify.dt");
  const double tol = cfg.positive("verify.continuity_tol");
  const double x0 = cfg.real("state.x0"), sigma = cfg.positive("state.sigma"), p0 = cfg.real("state.p0");
  const auto pot = potential(cfg, grid, units);
  const auto unitarity_steps = cfg.count("verify.unitarity_steps");
  const auto m_points = cfg.count("verify.martingale_points");
  const auto m_samples = cfg.count("verify.martingale_samples");
  if (m_samples < 2) throw UsageError("config field 'verify.martingale_samples': need at least 2");
  const double h_dx = cfg.positive("verify.harmonic_dx");
  const double h_dt = cfg.positive("verify.harmonic_dt");
  const auto seed = cfg.seed();
  const double hbar = units.hbar();

  std::vector<Check> checks;
  const auto psi0 = gaussian_packet(grid, x0, sigma, p0, hbar);

  {  // Transform pair.
    const auto phi = to_momentum(psi0, hbar);
    const double parseval = std::abs(phi.norm_squared() - psi0.norm_squared());
    checks.push_back({"parseval", parseval, 1e-12, parseval <= 1e-12, "| sum|phi|^2 dp - sum|psi|^2 dx |"});
    const auto back = from_momentum(phi);
    double rt = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) rt = std::max(rt, std::abs(back.amp[i] - psi0.amp[i]));
    checks.push_back({"transform_round_trip", rt, 1e-12, rt <= 1e-12, "max |F^-1 F psi - psi|"});
  }
  {  // Norm drift.
    auto psi = psi0;
    CrankNicolson cn(pot, units, {dt});
    for (std::uint64_t s = 0; s < unitarity_steps; ++s) cn.step_in_place(psi);
    const double drift = std::abs(psi.norm_squared() - 1.0);
    checks.push_back({"unitarity", drift, 1e-10, drift <= 1e-10,
                      std::to_string(unitarity_steps) + " steps of dt = " + fmt(dt)});
  }
  {  // Continuity residual under (dx, dt) -> (dx/2, dt/2), free packet.
    auto residual = [&](const LatticeGrid& g, double step_dt) {
      const auto psi = gaussian_packet(g, x0, sigma, p0, hbar);
      const auto next = step(psi, Potential::zero(g), units, {step_dt});
      return continuity_residual(psi, next, units).max_norm;
    };
    const double coarse = residual(grid, dt);
    const double fine = residual(LatticeGrid(2 * grid.size(), 0.5 * grid.dx(), grid.x_min(), grid.boundary()), 0.5 * dt);
    const double ratio = coarse / fine;
    const bool pass = ratio >= 3.5 && coarse <= tol;
    checks.push_back({"continuity_convergence", ratio, 3.5, pass,
                      "coarse residual " + fmt(coarse) + " (bound " + fmt(tol) + "), fine " + fmt(fine)});
  }
  {  // Martingale: exact drift and sampled single steps.
    CounterRng pick(seed, 0);
    double worst_alg = 0.0, worst_sigma = 0.0;
    for (std::uint64_t p = 0; p < m_points; ++p) {
      const double rho = 0.02 + 0.96 * pick.uniform();
      const double lambda = 0.001 + 0.2 * pick.uniform();
      worst_alg = std::max(worst_alg, std::abs(walk_drift(rho, lambda)));
      CounterRng rng(seed, 1 + p);
      double sum = 0.0;
      for (std::uint64_t s = 0; s < m_samples; ++s) sum += walk_step(rho, lambda, rng) - rho;
      const double mean = sum / static_cast<double>(m_samples);
      const double sd = lambda * std::sqrt(rho * (1.0 - rho) / static_cast<double>(m_samples));
      worst_sigma = std::max(worst_sigma, std::abs(mean) / sd);
    }
    checks.push_back({"martingale_algebraic", worst_alg, 1e-15, worst_alg <= 1e-15, "max |E[d rho]| from the step rule"});
    checks.push_back({"martingale_empirical", worst_sigma, 3.0, worst_sigma <= 3.0,
                      "max |mean d rho| / sigma over " + std::to_string(m_points) + " points"});
  }
  {  // Free packet: <x>(t) on a straight line.
    auto psi = psi0;
    const auto free = Potential::zero(grid);
    CrankNicolson cn(free, units, {0.01});
    std::vector<double> ts, xs;
    for (int s = 0; s <= 200; ++s) {
      if (s > 0) cn.step_in_place(psi);
      ts.push_back(psi.time);
      xs.push_back(observables(psi, free, units).mean_x);
    }
    const double slope = fit_slope(ts, xs);
    double tm = 0.0, xm = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) tm += ts[i], xm += xs[i];
    tm /= static_cast<double>(ts.size());
    xm /= static_cast<double>(ts.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) worst = std::max(worst, std::abs(xs[i] - (xm + slope * (ts[i] - tm))));
    const double span = std::max(std::abs(xs.back() - xs.front()), 1e-300);
    const double rel = worst / span;
    checks.push_back({"ehrenfest_free", rel, 1e-6, rel <= 1e-6, "max deviation of <x>(t) from its line / travel"});
  }
  {  // Oscillator coherent state against x0 cos(w t) over one period.
    const double amp0 = 2.0;
    const auto n = static_cast<std::size_t>(std::llround(24.0 / h_dx));
    const LatticeGrid hg(n, h_dx, -0.5 * static_cast<double>(n) * h_dx, Boundary::kPeriodic);
    const auto hp = make_potential("harmonic(1)", hg, units);
    const auto ground = nearest_eigenstate(hp, units, 0.5 * hbar).state;
    const auto shift = static_cast<std::size_t>(std::llround(amp0 / h_dx));
    std::vector<Complex> a(n);
    for (std::size_t i = 0; i < n; ++i) a[(i + shift) % n] = ground.amp[i];
    WaveFunction psi(hg, std::move(a));
    psi.normalize();
    const double x_start = observables(psi, hp, units).mean_x;
    const auto steps = static_cast<std::uint64_t>(std::llround(2.0 * std::numbers::pi / h_dt));
    CrankNicolson cn(hp, units, {h_dt});
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= steps; ++s) {
      cn.step_in_place(psi);
      const double classical = x_start * std::cos(psi.time);
      worst = std::max(worst, std::abs(observables(psi, hp, units).mean_x - classical));
    }
    const double rel = worst / std::abs(x_start);
    checks.push_back({"ehrenfest_harmonic", rel, 1e-3, rel <= 1e-3,
                      "max |<x> - x0 cos t| / x0 over one period, dx = " + fmt(h_dx) + ", dt = " + fmt(h_dt)});
  }

  CommandOutput out;
  bool all = true;
  json rows = json::array();
  std::ostringstream text;
  text << "check                     value          threshold   result\n";
  for (const auto& c : checks) {
    all = all && c.pass;
    rows.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}, {"detail", c.detail}});
    char line[160];
    std::snprintf(line, sizeof line, "%-25s %-14.6g %-11.3g %s\n", c.name.c_str(), c.value, c.threshold,
                  c.pass ? "PASS" : "FAIL");
    text << line;
  }
  out.exit_code = all ? 0 : 1;
  out.summary = {{"command", "verify"}, {"all_pass", all}, {"checks", rows}, {"config", cfg.echo()}};
  out.files = {{"report.json", dump(out.summary)}, {"report.txt", cfg.csv_header() + text.str()}};
  out.text = text.str();
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput cmd_planck(const RunConfig& cfg, unsigned) {
  if (!cfg.is("units.mode", "si")) throw UsageError("config field 'units.mode': planck works in si units");
  const auto units = cfg.units();
  auto cc = collapse_config(cfg);
  cc.rate.reset();
  const double L = cfg.positive("planck.length");
  const double c = *units.speed_of_light(), G = *units.grav_constant(), hbar = units.hbar();
  // Minimizer of sqrt(hbar L / (m c)) + G m / c^2.
  const double m_opt = std::cbrt(std::pow(c * c / (2.0 * G), 2.0) * hbar * L / c);
  double m = m_opt;
  if (const auto given = cfg.real_or("planck.clock_mass", "auto")) {
    if (!(*given > 0.0)) throw UsageError("config field 'planck.clock_mass': must be positive");
    m = *given;
  }
  const auto lu = units.min_length_uncertainty(L, m);
  const double dE = cfg.energy("planck.dE");
  const auto tau = collapse_time(dE, units, cc);

  CommandOutput out;
  json& j = out.summary;
  j = {{"command", "planck"},
       {"planck_length", units.planck_length()},
       {"planck_time", units.planck_time()},
       {"planck_energy", units.planck_energy()},
       {"length", L},
       {"clock_mass", m},
       {"optimal_clock_mass", m_opt},
       {"dL_quantum", lu.quantum},
       {"dL_gravitational", lu.gravitational},
       {"dL_total", lu.total},
       {"dE", dE},
       {"k", cc.k},
       {"tau_c", tau ? json(*tau) : json("inf")},
       {"config", cfg.echo()}};
  out.files = {{"result.json", dump(j)}};
  std::ostringstream text;
  text << "L_p = " << fmt(units.planck_length()) << " m\nT_p = " << fmt(units.planck_time()) << " s\n"
       << "E_p = " << fmt(units.planck_energy()) << " J\n"
       << "length " << fmt(L) << " m, clock mass " << fmt(m) << " kg\n"
       << "dL quantum " << fmt(lu.quantum) << " m, gravitational " << fmt(lu.gravitational) << " m, bound "
       << fmt(lu.total) << " m\n"
       << "tau_c(dE = " << fmt(dE) << " J) = " << (tau ? fmt(*tau) : std::string("inf")) << " s\n";
  out.text = text.str();
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"evolve", "collapse", "twolevel", "doubleslit", "verify", "planck"};
  return names;
}

CommandOutput run_command(std::string_view name, const RunConfig& cfg, unsigned threads) {
  if (name == "evolve") return cmd_evolve(cfg, threads);
  if (name == "collapse") return cmd_collapse(cfg, threads);
  if (name == "twolevel") return cmd_twolevel(cfg, threads);
  if (name == "doubleslit") return cmd_doubleslit(cfg, threads);
  if (name == "verify") return cmd_verify(cfg, threads);
  if (name == "planck") return cmd_planck(cfg, threads);
  throw UsageError("unknown command '" + std::string(name) + "'");
}

}  // namespace dstc::app
