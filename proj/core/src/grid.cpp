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

#include "dstc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dstc/error.hpp"

namespace dstc {

std::string_view to_string(Boundary b) {
  return b == Boundary::kPeriodic ? "periodic" : "dirichlet";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "periodic") return Boundary::kPeriodic;
  if (text == "dirichlet") return Boundary::kDirichlet;
  throw UsageError("unknown boundary '" + std::string(text) + "' (expected periodic or dirichlet)");
}

LatticeGrid::LatticeGrid(std::size_t n_cells, double dx, double x_min, Boundary boundary)
    : n_cells_(n_cells), dx_(dx), x_min_(x_min), boundary_(boundary) {
  if (n_cells < 2) throw UsageError("LatticeGrid: n_cells must be at least 2");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw UsageError("LatticeGrid: dx must be positive");
  if (!std::isfinite(x_min)) throw UsageError("LatticeGrid: x_min must be finite");
}

WaveFunction::WaveFunction(LatticeGrid g, std::vector<Complex> a, double t)
    : grid(std::move(g)), amp(std::move(a)), time(t) {
  if (amp.size() != grid.size()) {
    throw UsageError("WaveFunction: amplitude count " + std::to_string(amp.size()) +
                     " does not match grid size " + std::to_string(grid.size()));
  }
}

double WaveFunction::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return s * grid.dx();
}

void WaveFunction::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw DomainError("WaveFunction::normalize: zero state");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& a : amp) a *= scale;
}

void require_normalized(const WaveFunction& psi, std::string_view where) {
  if (!psi.is_normalized()) {
    throw UsageError(std::string(where) + ": wavefunction not normalized (norm^2 = " +
                     std::to_string(psi.norm_squared()) + ")");
  }
}

void require_same_grid(const LatticeGrid& a, const LatticeGrid& b, std::string_view where) {
  if (!(a == b)) throw UsageError(std::string(where) + ": grids differ");
}

Complex inner_product(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a.grid, b.grid, "inner_product");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
  return s * a.grid.dx();
}

WaveFunction gaussian_packet(const LatticeGrid& grid, double x0, double sigma, double p0, double hbar) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("gaussian_packet: sigma must be positive");
  if (!(hbar > 0.0)) throw DomainError("gaussian_packet: hbar must be positive");
  if (!std::isfinite(x0) || !std::isfinite(p0)) throw DomainError("gaussian_packet: non-finite centre");
  std::vector<Complex> amp(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = (grid.x(i) - x0) / sigma;
    amp[i] = std::exp(-0.25 * d * d) * std::polar(1.0, p0 * grid.x(i) / hbar);
  }
  WaveFunction psi(grid, std::move(amp));
  psi.normalize();
  return psi;
}

namespace {

template <typename T>
std::vector<T> derivative_impl(const LatticeGrid& grid, std::span<const T> f) {
  const std::size_t n = grid.size();
  const double inv2dx = 0.5 / grid.dx();
  std::vector<T> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2dx;
  if (grid.periodic()) {
    d[0] = (f[1] - f[n - 1]) * inv2dx;
    d[n - 1] = (f[0] - f[n - 2]) * inv2dx;
  } else if (n >= 3) {
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2dx;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2dx;
  } else {
    d[0] = d[1] = (f[1] - f[0]) / grid.dx();
  }
  return d;
}

}  // namespace

std::vector<Complex> derivative(const LatticeGrid& grid, std::span<const Complex> f) {
  return derivative_impl<Complex>(grid, f);
}

std::vector<double> derivative(const LatticeGrid& grid, std::span<const double> f) {
  return derivative_impl<double>(grid, f);
}

MeasureField extract_measures(const WaveFunction& psi, const UnitSystem& units) {
  const std::size_t n = psi.grid.size();
  MeasureField mf{psi.grid, std::vector<double>(n), std::vector<double>(n)};
  const auto dpsi = derivative(psi.grid, std::span<const Complex>(psi.amp));
  const double hbar_over_m = units.hbar() / units.mass();
  for (std::size_t i = 0; i < n; ++i) {
    mf.rho[i] = std::norm(psi.amp[i]);
    mf.flux[i] = hbar_over_m * std::imag(std::conj(psi.amp[i]) * dpsi[i]);
  }
  return mf;
}

std::vector<double> reconstruct_phase(const MeasureField& mf, double mass) {
  const std::size_t n = mf.grid.size();
  const double floor = mf.grid.rho_floor();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mf.rho[i] > floor)) {
      throw NodalRegionError("reconstruct_phase: density below floor at cell " + std::to_string(i) +
                                 "; phase undefined across a node",
                             i);
    }
  }
  std::vector<double> phase(n, 0.0);
  double prev = mf.flux[0] / mf.rho[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double v = mf.flux[i] / mf.rho[i];
    phase[i] = phase[i - 1] + 0.5 * mass * (prev + v) * mf.grid.dx();
    prev = v;
  }
  return phase;
}

WaveFunction rebuild_wavefunction(const MeasureField& mf, std::span<const double> phase, double hbar,
                                  double time) {
  std::vector<Complex> amp(mf.grid.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    amp[i] = std::polar(std::sqrt(mf.rho[i]), phase[i] / hbar);
  }
  WaveFunction psi(mf.grid, std::move(amp), time);
  psi.normalize();
  return psi;
}

ContinuityResidual continuity_residual(const WaveFunction& psi_t1, const WaveFunction& psi_t2,
                                       const UnitSystem& units) {
  require_same_grid(psi_t1.grid, psi_t2.grid, "continuity_residual");
  const double dt = psi_t2.time - psi_t1.time;
  if (!(dt > 0.0)) throw UsageError("continuity_residual: t2 must be later than t1");

  const auto m1 = extract_measures(psi_t1, units);
  const auto m2 = extract_measures(psi_t2, units);
  const std::size_t n = psi_t1.grid.size();
  std::vector<double> j_mid(n);
  for (std::size_t i = 0; i < n; ++i) j_mid[i] = 0.5 * (m1.flux[i] + m2.flux[i]);
  const auto dj = derivative(psi_t1.grid, std::span<const double>(j_mid));

  ContinuityResidual out;
  out.field.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.field[i] = (m2.rho[i] - m1.rho[i]) / dt + dj[i];
    out.max_norm = std::max(out.max_norm, std::abs(out.field[i]));
  }
  return out;
}

}  // namespace dstc
