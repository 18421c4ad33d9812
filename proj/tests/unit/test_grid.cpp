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


// Lattice, measure extraction, phase reconstruction and the continuity
// residual. Oracles are closed-form lattice expressions: for a plane wave
// e^{ipx} the central difference gives exactly i sin(p dx) / dx.

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dstc/error.hpp"
#include "dstc/grid.hpp"
#include "dstc/schrodinger.hpp"

using namespace dstc;
using std::numbers::pi;

namespace {

const UnitSystem kUnits = UnitSystem::scaled(100.0);

WaveFunction plane_wave(const LatticeGrid& g, double p) {
  std::vector<Complex> a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) a[i] = std::polar(1.0 / std::sqrt(g.length()), p * g.x(i));
  return WaveFunction(g, std::move(a));
}

double max_flux_error(double dx, double p0) {
  const auto n = static_cast<std::size_t>(std::llround(40.0 / dx));
  const LatticeGrid g(n, dx, -20.0, Boundary::kPeriodic);
  const auto psi = gaussian_packet(g, 0.0, 1.5, p0, 1.0);
  const auto mf = extract_measures(psi, kUnits);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(mf.flux[i] - mf.rho[i] * p0));
  return err;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  const LatticeGrid g(10, 0.5, -2.0, Boundary::kDirichlet);
  CHECK(g.size() == 10);
  CHECK(g.x(0) == -2.0);
  CHECK(g.x(9) == doctest::Approx(2.5));
  CHECK(g.length() == doctest::Approx(5.0));
  CHECK_FALSE(g.periodic());
  CHECK(g.rho_floor() == doctest::Approx(1e-12 / 5.0));
  CHECK_THROWS_AS(LatticeGrid(1, 0.1, 0.0, Boundary::kPeriodic), UsageError);
  CHECK_THROWS_AS(LatticeGrid(10, 0.0, 0.0, Boundary::kPeriodic), UsageError);
  CHECK_THROWS_AS(LatticeGrid(10, -1.0, 0.0, Boundary::kPeriodic), UsageError);
  CHECK(parse_boundary("periodic") == Boundary::kPeriodic);
  CHECK(parse_boundary(to_string(Boundary::kDirichlet)) == Boundary::kDirichlet);
  CHECK_THROWS_AS(parse_boundary("reflecting"), UsageError);
}

TEST_CASE("wavefunction normalization contract") {
  const LatticeGrid g(4, 0.5, 0.0, Boundary::kPeriodic);
  CHECK_THROWS_AS(WaveFunction(g, std::vector<Complex>(3)), UsageError);
  WaveFunction psi(g, {1.0, 1.0, 1.0, 1.0});
  CHECK(psi.norm_squared() == doctest::Approx(2.0));
  CHECK_THROWS_AS(require_normalized(psi, "test"), UsageError);
  psi.normalize();
  CHECK(psi.is_normalized());
  CHECK_NOTHROW(require_normalized(psi, "test"));
  WaveFunction zero(g, std::vector<Complex>(4));
  CHECK_THROWS_AS(zero.normalize(), DomainError);
}

TEST_CASE("gaussian packet has the requested rms width and centre") {
  const LatticeGrid g(4000, 0.01, -20.0, Boundary::kPeriodic);
  const auto psi = gaussian_packet(g, 1.5, 2.0, 0.0, 1.0);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = std::norm(psi.amp[i]) * g.dx();
    mean += w * g.x(i);
    m2 += w * g.x(i) * g.x(i);
  }
  CHECK(psi.is_normalized(1e-13));
  CHECK(mean == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(std::sqrt(m2 - mean * mean) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("central derivative of a lattice sine is exact") {
  // (sin(k(x+dx)) - sin(k(x-dx))) / (2dx) = cos(kx) sin(k dx) / dx.
  const LatticeGrid g(64, 0.1, 0.0, Boundary::kPeriodic);
  const double k = 2.0 * pi * 3.0 / g.length();
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(k * g.x(i));
  const auto d = derivative(g, std::span<const double>(f));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(d[i] == doctest::Approx(std::cos(k * g.x(i)) * std::sin(k * g.dx()) / g.dx()).epsilon(1e-12));
  }
}

TEST_CASE("dirichlet edges use second-order stencils, exact on quadratics") {
  const LatticeGrid g(11, 0.1, 0.0, Boundary::kDirichlet);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = 3.0 * g.x(i) * g.x(i) - g.x(i);
  const auto d = derivative(g, std::span<const double>(f));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(d[i] == doctest::Approx(6.0 * g.x(i) - 1.0).epsilon(1e-12));
}

TEST_CASE("plane wave: uniform density, flux sin(p dx) / (m dx L)") {
  const LatticeGrid g(128, 0.05, -3.2, Boundary::kPeriodic);
  const double p = 2.0 * pi * 5.0 / g.length();
  const auto mf = extract_measures(plane_wave(g, p), kUnits);
  const double rho = 1.0 / g.length();
  const double flux = std::sin(p * g.dx()) / g.dx() * rho;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(mf.rho[i] == doctest::Approx(rho).epsilon(1e-13));
    CHECK(mf.flux[i] == doctest::Approx(flux).epsilon(1e-12));
  }
  // Continuum value rho p / m, off by (p dx)^2 / 6 at leading order.
  const double rel = std::abs(flux - rho * p) / (rho * p);
  CHECK(rel == doctest::Approx(std::pow(p * g.dx(), 2) / 6.0).epsilon(1e-2));
}

TEST_CASE("modulated plane wave: flux approaches rho p0 / m at second order") {
  // Flux of A(x) e^{i p0 x} with real A is A^2 p0 in the continuum.
  const double e1 = max_flux_error(0.1, 1.0);
  const double e2 = max_flux_error(0.05, 1.0);
  CHECK(e1 < 2e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("two-momentum superposition: density fringes 1 + cos(dp x)") {
  const LatticeGrid g(200, 0.05, 0.0, Boundary::kPeriodic);
  const double p1 = 2.0 * pi * 2.0 / g.length(), p2 = 2.0 * pi * 7.0 / g.length();
  std::vector<Complex> a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    a[i] = (std::polar(1.0, p1 * g.x(i)) + std::polar(1.0, p2 * g.x(i))) / std::sqrt(2.0 * g.length());
  }
  const WaveFunction psi(g, std::move(a));
  CHECK(psi.is_normalized(1e-12));
  const auto mf = extract_measures(psi, kUnits);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(mf.rho[i] == doctest::Approx((1.0 + std::cos((p1 - p2) * g.x(i))) / g.length()).epsilon(1e-12));
  }
}

TEST_CASE("complex conjugation flips the flux and keeps the density") {
  const LatticeGrid g(300, 0.05, -7.5, Boundary::kPeriodic);
  auto psi = gaussian_packet(g, 0.3, 1.0, 2.0, 1.0);
  auto conj = psi;
  for (auto& a : conj.amp) a = std::conj(a);
  const auto m = extract_measures(psi, kUnits), mc = extract_measures(conj, kUnits);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(mc.rho[i] == m.rho[i]);
    CHECK(mc.flux[i] == -m.flux[i]);
  }
}

TEST_CASE("phase of a plane wave reconstructs linearly") {
  const LatticeGrid g(100, 0.1, 0.0, Boundary::kPeriodic);
  const double p = 2.0 * pi * 4.0 / g.length();
  const auto mf = extract_measures(plane_wave(g, p), kUnits);
  const auto S = reconstruct_phase(mf, 1.0);
  const double slope = std::sin(p * g.dx()) / g.dx();  // hbar = m = 1
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(S[i] == doctest::Approx(slope * (g.x(i) - g.x_min())).epsilon(1e-12));
    // Against the continuum phase p (x - x_min): relative error (p dx)^2 / 6.
    if (i > 0) CHECK(std::abs(S[i] / (p * (g.x(i) - g.x_min())) - 1.0) <= 1.01 * std::pow(p * g.dx(), 2) / 6.0);
  }
}

TEST_CASE("zero flux gives a constant phase") {
  const LatticeGrid g(100, 0.1, -5.0, Boundary::kDirichlet);
  const auto psi = gaussian_packet(g, 0.0, 3.0, 0.0, 1.0);
  const auto S = reconstruct_phase(extract_measures(psi, kUnits), 1.0);
  for (double s : S) CHECK(s == 0.0);
}

TEST_CASE("measure round trip reproduces a nodeless state") {
  const LatticeGrid g(1200, 0.01, -6.0, Boundary::kDirichlet);
  const auto psi = gaussian_packet(g, 0.5, 2.0, 1.3, 1.0);
  const auto mf = extract_measures(psi, kUnits);
  const auto rebuilt = rebuild_wavefunction(mf, reconstruct_phase(mf, 1.0), 1.0);
  const double fidelity = std::norm(inner_product(psi, rebuilt));
  CHECK(fidelity >= 1.0 - 1e-6);
}

TEST_CASE("phase reconstruction refuses nodal regions") {
  const LatticeGrid g(8, 0.5, 0.0, Boundary::kDirichlet);
  WaveFunction psi(g, {1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0});
  psi.normalize();
  try {
    (void)reconstruct_phase(extract_measures(psi, kUnits), 1.0);
    FAIL("expected NodalRegionError");
  } catch (const NodalRegionError& e) {
    CHECK(e.cell() == 3);
  }
}

TEST_CASE("continuity residual vanishes for stationary states") {
  SUBCASE("plane wave") {
    const LatticeGrid g(128, 0.05, 0.0, Boundary::kPeriodic);
    const auto psi = plane_wave(g, 2.0 * pi * 3.0 / g.length());
    const auto next = step(psi, Potential::zero(g), kUnits, {0.01});
    CHECK(continuity_residual(psi, next, kUnits).max_norm < 1e-10);
  }
  SUBCASE("oscillator eigenstate") {
    const LatticeGrid g(400, 0.05, -10.0, Boundary::kDirichlet);
    const auto pot = make_potential("harmonic(1)", g, kUnits);
    const auto eig = nearest_eigenstate(pot, kUnits, 0.4);
    const auto next = step(eig.state, pot, kUnits, {0.01});
    CHECK(continuity_residual(eig.state, next, kUnits).max_norm < 1e-10);
  }
}

TEST_CASE("continuity residual converges at second order for a moving packet") {
  auto residual = [](std::size_t n, double dx, double dt) {
    const LatticeGrid g(n, dx, -12.8, Boundary::kPeriodic);
    const auto psi = gaussian_packet(g, 0.0, 1.0, 1.0, 1.0);
    return continuity_residual(psi, step(psi, Potential::zero(g), kUnits, {dt}), kUnits).max_norm;
  };
  const double r1 = residual(256, 0.1, 0.02);
  const double r2 = residual(512, 0.05, 0.01);
  const double r3 = residual(1024, 0.025, 0.005);
  CHECK(r1 / r2 >= 3.5);
  CHECK(r2 / r3 >= 3.5);
}

TEST_CASE("continuity residual needs ordered times on one grid") {
  const LatticeGrid g(16, 0.5, 0.0, Boundary::kPeriodic);
  const auto psi = gaussian_packet(g, 4.0, 1.0, 0.0, 1.0);
  CHECK_THROWS_AS(continuity_residual(psi, psi, kUnits), UsageError);
  const LatticeGrid other(16, 0.25, 0.0, Boundary::kPeriodic);
  auto moved = gaussian_packet(other, 2.0, 1.0, 0.0, 1.0);
  moved.time = 1.0;
  CHECK_THROWS_AS(continuity_residual(psi, moved, kUnits), UsageError);
}
