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


// Collapse ensembles, observables and the two-region test systems.

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "dstc/ensemble.hpp"
#include "dstc/error.hpp"
#include "json.hpp"

using namespace dstc;

namespace {

const UnitSystem kUnits30 = UnitSystem::scaled(30.0);

double entropy(double a) { return -a * std::log(a) - (1.0 - a) * std::log(1.0 - a); }

}  // namespace

TEST_CASE("two-site system: levels, localization, negligible hopping") {
  const auto sys = make_two_site_system(2.0, kUnits30);
  CHECK(sys.grid.size() == 2);
  CHECK(sys.cell_width == 1);
  // Hopping t = 1e-6 dE shifts each level by t^2 / dE = 1e-12 dE.
  CHECK(sys.E2 - sys.E1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(cell_measures(sys.state1, 1)[0] > 1.0 - 1e-11);
  CHECK(cell_measures(sys.state2, 1)[1] > 1.0 - 1e-11);
  const auto psi = sys.superpose(0.3);
  // Leakage amplitude 1e-6 enters the cell measure through the cross term.
  CHECK(cell_measures(psi, 1)[0] == doctest::Approx(0.3).epsilon(1e-5));
  CHECK_THROWS_AS(sys.superpose(1.5), DomainError);
}

TEST_CASE("two-region system splits the lattice at the barrier") {
  const auto sys = make_two_region_system({}, kUnits30);
  CHECK(sys.grid.size() == 64);
  CHECK(sys.cell_width == 32);
  CHECK(sys.E2 - sys.E1 == doctest::Approx(1.0).epsilon(1e-6));
  // Ground level of a 30-cell box: 1 - cos(pi / 31) in units hbar^2 / (m dx^2).
  CHECK(sys.E1 == doctest::Approx(1.0 - std::cos(std::numbers::pi / 31.0)).epsilon(1e-3));
  CHECK(cell_measures(sys.state1, 32)[0] > 1.0 - 1e-9);
  CHECK(cell_measures(sys.state2, 32)[1] > 1.0 - 1e-9);
  CHECK(std::abs(inner_product(sys.state1, sys.state2)) < 1e-9);
  TwoRegionSpec odd;
  odd.barrier_cells = 3;
  CHECK_THROWS_AS(make_two_region_system(odd, kUnits30), UsageError);
}

TEST_CASE("ensemble histogram follows the Born weight") {
  const auto sys = make_two_site_system(1.0, kUnits30);
  CollapseConfig cfg;
  cfg.cell_width = 1;
  cfg.seed = 17;
  EnsembleOptions opts;
  opts.n_traj = 1000;
  opts.t_max = 3000.0;  // 50 tau_c with T_p = 1/30
  const auto res = run_ensemble(sys.superpose(0.3), sys.potential, kUnits30, cfg, opts);
  CHECK(res.unabsorbed == 0);
  CHECK(res.counts[0] + res.counts[1] == 1000);
  CHECK(res.collapse_times.size() == 1000);
  CHECK(std::abs(res.histogram[0] - 0.3) <= 3.0 * std::sqrt(0.21 / 1000.0) + cfg.eps);
  // lambda = 1/31: the diffusion limit gives 2 H(0.3) / lambda^2 steps; the
  // finite jump size adds a correction of order lambda.
  const double lambda = 1.0 / 31.0;
  const double steps = res.mean_collapse_time() / kUnits30.planck_time();
  CHECK(steps * lambda * lambda == doctest::Approx(2.0 * entropy(0.3)).epsilon(0.12));
}

TEST_CASE("mean collapse time scales as dE^-2") {
  // Same seeds at every dE, so the statistical noise is largely common.
  const std::vector<double> dEs{0.3, 0.6, 1.2};
  const auto units = UnitSystem::scaled(30.0);
  std::vector<double> lx, ly;
  for (double dE : dEs) {
    const auto sys = make_two_site_system(dE, units);
    CollapseConfig cfg;
    cfg.cell_width = 1;
    cfg.seed = 4;
    EnsembleOptions opts;
    opts.n_traj = 300;
    opts.t_max = 200.0 * *collapse_time(dE, units, cfg);
    const auto res = run_ensemble(sys.superpose(0.5), sys.potential, units, cfg, opts);
    REQUIRE(res.unabsorbed == 0);
    lx.push_back(std::log(dE));
    ly.push_back(std::log(res.mean_collapse_time()));
  }
  CHECK(fit_slope(lx, ly) == doctest::Approx(-2.0).epsilon(0.1));
}

TEST_CASE("ensemble output does not depend on the thread count") {
  const auto sys = make_two_region_system({}, kUnits30);
  CollapseConfig cfg;
  cfg.cell_width = sys.cell_width;
  cfg.seed = 99;
  cfg.rate = 0.1;
  EnsembleOptions opts;
  opts.n_traj = 40;
  opts.t_max = 2000.0;
  opts.logged_trajectories = 2;
  opts.log_stride = 7;
  const auto psi = sys.superpose(0.5);
  const auto a = run_ensemble(psi, sys.potential, kUnits30, cfg, opts);
  opts.threads = 3;
  const auto b = run_ensemble(psi, sys.potential, kUnits30, cfg, opts);
  CHECK(to_json(a) == to_json(b));
  for (std::size_t i = 0; i < a.logs.size(); ++i) {
    std::ostringstream sa, sb;
    write_trajectory_csv(sa, a.logs[i]);
    write_trajectory_csv(sb, b.logs[i]);
    CHECK(sa.str() == sb.str());
  }
}

TEST_CASE("trajectory logs") {
  const auto sys = make_two_site_system(1.0, kUnits30);
  CollapseConfig cfg;
  cfg.cell_width = 1;
  cfg.rate = 0.05;
  EnsembleOptions opts;
  opts.n_traj = 3;
  opts.t_max = 300.0;
  opts.logged_trajectories = 5;  // clamped to n_traj
  opts.log_stride = 10;
  const auto res = run_ensemble(sys.superpose(0.4), sys.potential, kUnits30, cfg, opts);
  REQUIRE(res.logs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& rows = res.logs[i].rows;
    CHECK(res.logs[i].index == i);
    CHECK(rows.front().t == 0.0);
    CHECK(rows.front().cell_measures[0] == doctest::Approx(0.4));
    for (std::size_t r = 1; r + 1 < rows.size(); ++r) {
      const double step = rows[r].t / kUnits30.planck_time();
      CHECK(std::fmod(std::round(step), 10.0) == 0.0);
      CHECK(step == doctest::Approx(std::round(step)));
      CHECK(rows[r].delta_E == doctest::Approx(0.05 * 30.0));
    }
    // Last row is the collapse.
    CHECK(std::max(rows.back().cell_measures[0], rows.back().cell_measures[1]) >= 1.0 - cfg.eps);
  }
  std::ostringstream csv;
  write_trajectory_csv(csv, res.logs[0]);
  std::istringstream in(csv.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "t,m0,m1,stay_cell,dE");
  CHECK(first.rfind("0,0.39999", 0) == 0);
}

TEST_CASE("edge cases: already collapsed, truncated runs, bad options") {
  const auto sys = make_two_site_system(1.0, kUnits30);
  CollapseConfig cfg;
  cfg.cell_width = 1;
  EnsembleOptions opts;
  opts.n_traj = 5;
  opts.t_max = 10.0;

  const auto done = run_ensemble(sys.superpose(1.0), sys.potential, kUnits30, cfg, opts);
  CHECK(done.counts[0] == 5);
  for (double t : done.collapse_times) CHECK(t == 0.0);

  // 300 Planck times against tau_c = 1800 of them: nothing collapses.
  const auto cut = run_ensemble(sys.superpose(0.5), sys.potential, kUnits30, cfg, opts);
  CHECK(cut.unabsorbed == 5);
  CHECK(cut.unabsorbed_fraction() == 1.0);
  CHECK(cut.mean_collapse_time() == 0.0);

  auto bad = opts;
  bad.n_traj = 0;
  CHECK_THROWS_AS(run_ensemble(sys.superpose(0.5), sys.potential, kUnits30, cfg, bad), UsageError);
  bad = opts;
  bad.t_max = 0.0;
  CHECK_THROWS_AS(run_ensemble(sys.superpose(0.5), sys.potential, kUnits30, cfg, bad), UsageError);
  WaveFunction unnormalized = sys.superpose(0.5);
  unnormalized.amp[0] *= 2.0;
  CHECK_THROWS_AS(run_ensemble(unnormalized, sys.potential, kUnits30, cfg, opts), UsageError);
}

TEST_CASE("ensemble JSON summary") {
  const auto sys = make_two_site_system(1.0, kUnits30);
  CollapseConfig cfg;
  cfg.cell_width = 1;
  cfg.rate = 0.2;
  cfg.seed = 3;
  EnsembleOptions opts;
  opts.n_traj = 50;
  opts.t_max = 300.0;
  const auto res = run_ensemble(sys.superpose(0.5), sys.potential, kUnits30, cfg, opts);
  const auto j = nlohmann::json::parse(to_json(res));
  CHECK(j.at("n_traj") == 50);
  CHECK(j.at("seed") == 3);
  CHECK(j.at("counts")[0].get<int>() + j.at("counts")[1].get<int>() == 50);
  CHECK(j.at("absorption_freq").get<double>() == res.histogram[0]);
  CHECK(j.at("collapse_times").size() == 50);
  CHECK(j.at("config").at("collapse").at("rate") == 0.2);
  CHECK(j.at("config").at("units").at("planck_energy") == 30.0);
}

TEST_CASE("observables of a Gaussian packet") {
  const LatticeGrid g(2000, 0.02, -20.0, Boundary::kPeriodic);
  const auto u = UnitSystem::scaled(100.0);
  const auto psi = gaussian_packet(g, 1.5, 0.8, 2.0, 1.0);
  const auto o = observables(psi, make_potential("harmonic(1)", g, u), u);
  CHECK(o.mean_x == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(o.var_x == doctest::Approx(0.64).epsilon(1e-10));
  // Lattice momentum: <p> is hbar sin(p0 dx / hbar) / dx up to the packet spread.
  CHECK(o.mean_p == doctest::Approx(2.0).epsilon(1e-3));
  // hbar^2 / (4 sigma^2).
  CHECK(o.var_p == doctest::Approx(1.0 / (4.0 * 0.64)).epsilon(2e-3));
  // -<dU/dx> = -<x> for omega = 1.
  CHECK(o.mean_force == doctest::Approx(-1.5).epsilon(1e-6));
}

TEST_CASE("Ehrenfest tracking of a free packet") {
  const LatticeGrid g(1024, 0.05, -25.6, Boundary::kPeriodic);
  const auto u = UnitSystem::scaled(100.0);
  const auto pot = Potential::zero(g);
  CrankNicolson cn(pot, u, {0.01});
  std::vector<WaveFunction> snaps{gaussian_packet(g, -5.0, 1.0, 1.0, 1.0)};
  for (int k = 0; k < 20; ++k) {
    auto next = snaps.back();
    for (int s = 0; s < 10; ++s) cn.step_in_place(next);
    snaps.push_back(next);
  }
  const auto rep = ehrenfest_track(snaps, pot, u);
  CHECK(rep.dxdt.size() == 19);
  CHECK(rep.max_rel_residual_x < 1e-3);
  CHECK(rep.max_rel_residual_p < 1e-9);
  CHECK(rep.series.back().mean_x == doctest::Approx(-3.0).epsilon(2e-3));

  CHECK_THROWS_AS(ehrenfest_track(std::span(snaps).first(2), pot, u), UsageError);
  auto uneven = snaps;
  uneven[2].time += 0.05;
  CHECK_THROWS_AS(ehrenfest_track(uneven, pot, u), UsageError);
}

TEST_CASE("density matrix estimate from samples") {
  // Two samples with rho = 0.5 and relative phases 0 and pi/2.
  std::vector<TwoLevelSample> s{{0.5, {1, 0}, {1, 0}}, {0.5, {0, 1}, {1, 0}}};
  const auto est = estimate_density_matrix(s);
  CHECK(est.matrix.m[0][0].real() == doctest::Approx(0.5));
  CHECK(est.matrix.m[0][1].real() == doctest::Approx(0.25));
  CHECK(est.matrix.m[0][1].imag() == doctest::Approx(0.25));
  CHECK(est.matrix.m[1][0] == std::conj(est.matrix.m[0][1]));
  CHECK(est.warning);
  std::vector<TwoLevelSample> many(100, TwoLevelSample{0.3, {1, 0}, {1, 0}});
  const auto ok = estimate_density_matrix(many);
  CHECK_FALSE(ok.warning);
  CHECK(ok.matrix.m[0][1].real() == doctest::Approx(std::sqrt(0.21)));
  CHECK_THROWS_AS(estimate_density_matrix({}), UsageError);
}

TEST_CASE("two-region trajectory samples") {
  const auto sys = make_two_region_system({}, kUnits30);
  CollapseConfig cfg;
  cfg.seed = 12;
  const auto samples = sample_two_region_trajectories(sys, 0.3, kUnits30, cfg, 200, {0, 50, 400});
  REQUIRE(samples.size() == 3);
  // Step 0 reproduces the pure state.
  const auto e0 = estimate_density_matrix(samples[0]).matrix;
  CHECK(e0.m[0][0].real() == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(std::abs(e0.m[0][1]) == doctest::Approx(std::sqrt(0.21)).epsilon(1e-6));
  // Populations stay at 0.3 on average; coherence only shrinks.
  double prev = std::abs(e0.m[0][1]);
  for (std::size_t r = 1; r < 3; ++r) {
    const auto e = estimate_density_matrix(samples[r]).matrix;
    CHECK(std::abs(e.m[0][0].real() - 0.3) < 0.05);
    CHECK(std::abs(e.m[0][1]) < prev);
    prev = std::abs(e.m[0][1]);
  }
  // The basis phase removes the linear evolution: the relative phase stays 0.
  CHECK(std::abs(std::arg(estimate_density_matrix(samples[2]).matrix.m[0][1])) < 1e-6);
  CHECK_THROWS_AS(sample_two_region_trajectories(sys, 0.3, kUnits30, cfg, 2, {5, 1}), UsageError);
}

TEST_CASE("lattice cell measure follows the two-level walk path by path") {
  // With the same stream, the stay draw u < rho picks cell 0 exactly when the
  // walk steps up, and the lattice update reproduces the walk update. The
  // measure only drifts apart through rounding.
  const auto sys = make_two_region_system({10, 4, 1.0, 50.0, 1.0}, kUnits30);
  CollapseConfig cfg;
  cfg.cell_width = sys.cell_width;
  const double lambda = collapse_fraction(sys.E2 - sys.E1, kUnits30, cfg);
  for (std::uint64_t i = 0; i < 5; ++i) {
    CollapseEvolver evolver(sys.potential, kUnits30, cfg);
    CounterRng lattice_rng(31, i), walk_rng(31, i);
    auto psi = sys.superpose(0.3);
    double rho = 0.3;
    double worst = 0.0;
    for (int s = 0; s < 300; ++s) {
      evolver.advance(psi, lattice_rng);
      rho = walk_step(rho, lambda, walk_rng);
      worst = std::max(worst, std::abs(evolver.measures()[0] - rho));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("two-sample KS distance") {
  CHECK(ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_distance({1, 2, 3}, {2, 3, 4}) == doctest::Approx(1.0 / 3.0));
  CHECK(ks_distance({1, 2}, {5, 6, 7}) == 1.0);
  CHECK(ks_distance({1, 1, 2, 2}, {1, 2}) == 0.0);
  CHECK_THROWS_AS(ks_distance({}, {1}), UsageError);
}
