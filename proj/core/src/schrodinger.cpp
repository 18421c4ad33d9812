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

#include "dstc/schrodinger.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "dstc/error.hpp"

namespace dstc {

Potential::Potential(LatticeGrid g, std::vector<double> values, std::function<double(double)> mod)
    : grid(std::move(g)), u(std::move(values)), modulation(std::move(mod)) {
  if (u.size() != grid.size()) throw UsageError("Potential: value count does not match grid size");
  for (double v : u) {
    if (!std::isfinite(v)) throw UsageError("Potential: values must be finite; use a dirichlet grid for hard walls");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view context) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw UsageError("potential preset " + std::string(context) + ": bad number '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split_args(std::string_view args) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = args.find(',');
    out.push_back(trim(args.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> read_custom_potential(const std::string& path, const LatticeGrid& grid) {
  std::ifstream in(path);
  if (!in) throw UsageError("custom potential: cannot open '" + path + "'");
  std::vector<double> u;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto comma = sv.find(',');
    if (comma == std::string_view::npos) throw UsageError("custom potential: expected 'x,u' rows in " + path);
    const auto xs = trim(sv.substr(0, comma));
    if (u.empty() && !xs.empty() && std::isalpha(static_cast<unsigned char>(xs.front()))) continue;  // header
    u.push_back(parse_number(sv.substr(comma + 1), "custom"));
  }
  if (u.size() != grid.size()) {
    throw UsageError("custom potential: " + std::to_string(u.size()) + " rows in " + path + ", grid has " +
                     std::to_string(grid.size()) + " cells");
  }
  return u;
}

}  // namespace

Potential make_potential(std::string_view preset, const LatticeGrid& grid, const UnitSystem& units) {
  preset = trim(preset);
  std::string_view name = preset;
  std::string_view args;
  if (const auto open = preset.find('('); open != std::string_view::npos) {
    if (preset.back() != ')') throw UsageError("potential preset '" + std::string(preset) + "': missing ')'");
    name = trim(preset.substr(0, open));
    args = preset.substr(open + 1, preset.size() - open - 2);
  }
  const auto params = args.empty() ? std::vector<std::string_view>{} : split_args(args);
  auto expect = [&](std::size_t count) {
    if (params.size() != count) {
      throw UsageError("potential preset '" + std::string(name) + "' takes " + std::to_string(count) +
                       " argument(s)");
    }
  };

  std::vector<double> u(grid.size(), 0.0);
  if (name == "free") {
    expect(0);
  } else if (name == "box") {
    expect(0);
    if (grid.periodic()) throw UsageError("potential preset 'box' needs a dirichlet grid");
  } else if (name == "harmonic") {
    expect(1);
    const double omega = parse_number(params[0], "harmonic");
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = grid.x(i);
      u[i] = 0.5 * units.mass() * omega * omega * x * x;
    }
  } else if (name == "double_well") {
    expect(2);
    const double a = parse_number(params[0], "double_well");
    const double b = parse_number(params[1], "double_well");
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = grid.x(i);
      u[i] = a * (x * x - b * b) * (x * x - b * b);
    }
  } else if (name == "linear") {
    expect(1);
    const double force = parse_number(params[0], "linear");
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = -force * grid.x(i);
  } else if (name == "custom") {
    expect(1);
    u = read_custom_potential(std::string(params[0]), grid);
  } else {
    throw UsageError("unknown potential preset '" + std::string(name) + "'");
  }
  return Potential(grid, std::move(u));
}

// ---------------------------------------------------------------------------

TridiagonalSolver::TridiagonalSolver(std::vector<Complex> diag, Complex off, bool cyclic)
    : diag_(std::move(diag)), off_(off), cyclic_(cyclic) {
  orig_diag_ = diag_;
  if (diag_.size() < 2) throw UsageError("TridiagonalSolver: need at least 2 rows");
  // Two-cell ring: both neighbours of a cell are the same cell.
  if (cyclic_ && diag_.size() == 2) {
    cyclic_ = false;
    off_ *= 2.0;
  }
  factor();
}

void TridiagonalSolver::factor() {
  const std::size_t n = diag_.size();
  if (cyclic_) {
    gamma_ = -diag_[0];
    diag_[0] -= gamma_;
    diag_[n - 1] -= off_ * off_ / gamma_;
  }
  cprime_.assign(n, Complex{});
  inv_denom_.assign(n, Complex{});
  inv_denom_[0] = 1.0 / diag_[0];
  cprime_[0] = off_ * inv_denom_[0];
  for (std::size_t i = 1; i < n; ++i) {
    inv_denom_[i] = 1.0 / (diag_[i] - off_ * cprime_[i - 1]);
    cprime_[i] = off_ * inv_denom_[i];
  }
  if (cyclic_) {
    std::vector<Complex> u(n, Complex{});
    u[0] = gamma_;
    u[n - 1] = off_;
    z_.assign(n, Complex{});
    solve_plain(u, z_);
    vz_denom_ = 1.0 + z_[0] + off_ * z_[n - 1] / gamma_;
  }
}

void TridiagonalSolver::solve_plain(std::span<const Complex> rhs, std::span<Complex> x) const {
  const std::size_t n = diag_.size();
  x[0] = rhs[0] * inv_denom_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - off_ * x[i - 1]) * inv_denom_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cprime_[i] * x[i + 1];
}

void TridiagonalSolver::solve(std::span<const Complex> rhs, std::span<Complex> x) const {
  solve_plain(rhs, x);
  if (cyclic_) {
    const std::size_t n = diag_.size();
    const Complex fact = (x[0] + off_ * x[n - 1] / gamma_) / vz_denom_;
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z_[i];
  }
}

void TridiagonalSolver::multiply(std::span<const Complex> x, std::span<Complex> y) const {
  const std::size_t n = orig_diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = orig_diag_[i] * x[i];
    if (i > 0) s += off_ * x[i - 1];
    if (i + 1 < n) s += off_ * x[i + 1];
    y[i] = s;
  }
  if (cyclic_) {
    y[0] += off_ * x[n - 1];
    y[n - 1] += off_ * x[0];
  }
}

// ---------------------------------------------------------------------------

CrankNicolson::CrankNicolson(const Potential& pot, const UnitSystem& units, PropagatorConfig cfg)
    : pot_(pot), hbar_(units.hbar()), cfg_(cfg) {
  if (!(cfg.dt != 0.0) || !std::isfinite(cfg.dt)) throw UsageError("PropagatorConfig: dt must be finite and non-zero");
  const double dx = pot.grid.dx();
  kinetic_diag_ = hbar_ * hbar_ / (units.mass() * dx * dx);
  hop_ = -0.5 * kinetic_diag_;
  const std::size_t n = pot.grid.size();
  rhs_.resize(n);
  next_.resize(n);
  check_.resize(n);
  if (!pot_.time_dependent()) build(0.0);
}

void CrankNicolson::build(double t_mid) {
  const std::size_t n = pot_.grid.size();
  const Complex half{0.0, 0.5 * cfg_.dt / hbar_};  // i dt / (2 hbar)
  const double s = pot_.scale(t_mid);
  std::vector<Complex> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 1.0 + half * (kinetic_diag_ + s * pot_.u[i]);
  solver_.emplace(std::move(diag), half * hop_, pot_.grid.periodic());
  built_for_ = t_mid;
}

void CrankNicolson::step_in_place(WaveFunction& psi) {
  const std::size_t n = psi.amp.size();
  if (n != pot_.grid.size()) throw UsageError("CrankNicolson: wavefunction grid does not match potential");
  const double t_mid = psi.time + 0.5 * cfg_.dt;
  if (pot_.time_dependent() && (!solver_ || built_for_ != t_mid)) build(t_mid);

  // rhs = (2 - A) psi, since B = 2I - A.
  solver_->multiply(psi.amp, check_);
  double rhs_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rhs_[i] = 2.0 * psi.amp[i] - check_[i];
    rhs_max = std::max(rhs_max, std::norm(rhs_[i]));
  }
  rhs_max = std::sqrt(rhs_max);
  solver_->solve(rhs_, next_);
  solver_->multiply(next_, check_);
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::norm(check_[i] - rhs_[i]));
  resid = std::sqrt(resid);
  if (resid > cfg_.solver_tolerance * std::max(1.0, rhs_max)) {
    throw NumericalError("Crank-Nicolson solve residual " + std::to_string(resid) + " exceeds tolerance",
                         resid);
  }
  psi.amp.swap(next_);
  psi.time += cfg_.dt;
}

WaveFunction CrankNicolson::step(const WaveFunction& psi) {
  WaveFunction out = psi;
  step_in_place(out);
  return out;
}

WaveFunction step(const WaveFunction& psi, const Potential& pot, const UnitSystem& units,
                  const PropagatorConfig& cfg) {
  require_normalized(psi, "step");
  require_same_grid(psi.grid, pot.grid, "step");
  CrankNicolson cn(pot, units, cfg);
  return cn.step(psi);
}

std::vector<Complex> apply_hamiltonian(const WaveFunction& psi, const Potential& pot,
                                       const UnitSystem& units) {
  std::vector<Complex> h;
  apply_hamiltonian_into(psi, pot, units, h);
  return h;
}

void apply_hamiltonian_into(const WaveFunction& psi, const Potential& pot, const UnitSystem& units,
                            std::vector<Complex>& h) {
  require_same_grid(psi.grid, pot.grid, "apply_hamiltonian");
  const std::size_t n = psi.amp.size();
  const double dx = psi.grid.dx();
  const double kin = units.hbar() * units.hbar() / (units.mass() * dx * dx);
  const double hop = -0.5 * kin;
  const double s = pot.scale(psi.time);
  const auto& a = psi.amp;
  h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex nb{0.0, 0.0};
    if (i > 0) nb += a[i - 1];
    if (i + 1 < n) nb += a[i + 1];
    h[i] = (kin + s * pot.u[i]) * a[i] + hop * nb;
  }
  if (psi.grid.periodic()) {
    h[0] += hop * a[n - 1];
    h[n - 1] += hop * a[0];
  }
}

double energy_expectation(const WaveFunction& psi, const Potential& pot, const UnitSystem& units) {
  require_normalized(psi, "energy_expectation");
  const auto h = apply_hamiltonian(psi, pot, units);
  Complex e{0.0, 0.0};
  for (std::size_t i = 0; i < h.size(); ++i) e += std::conj(psi.amp[i]) * h[i];
  e *= psi.grid.dx();
  if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
    throw NumericalError("energy_expectation: imaginary residue " + std::to_string(e.imag()), e.imag());
  }
  return e.real();
}

LocalEnergyField local_energy_density(const WaveFunction& psi, const Potential& pot,
                                      const UnitSystem& units) {
  const auto h = apply_hamiltonian(psi, pot, units);
  const double floor = psi.grid.rho_floor();
  LocalEnergyField out{std::vector<double>(h.size(), 0.0), std::vector<bool>(h.size(), false)};
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double rho = std::norm(psi.amp[i]);
    if (rho > floor) {
      out.energy[i] = std::real(std::conj(psi.amp[i]) * h[i]) / rho;
      out.defined[i] = true;
    }
  }
  return out;
}

double discrete_kinetic_energy(double p, double dx, const UnitSystem& units) {
  const double hbar = units.hbar();
  return hbar * hbar / (units.mass() * dx * dx) * (1.0 - std::cos(p * dx / hbar));
}

double crank_nicolson_phase(double energy, double dt, double hbar) {
  return -2.0 * std::atan(energy * dt / (2.0 * hbar));
}

Eigenpair nearest_eigenstate(const Potential& pot, const UnitSystem& units, double shift) {
  const auto& grid = pot.grid;
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const double kin = units.hbar() * units.hbar() / (units.mass() * dx * dx);
  std::vector<Complex> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = kin + pot.u[i] - shift;
  const TridiagonalSolver solver(std::move(diag), -0.5 * kin, grid.periodic());

  // Deterministic start vector with weight on every cell.
  std::vector<Complex> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  Potential static_pot(grid, pot.u);
  double energy = shift;
  for (int iter = 0; iter < 200; ++iter) {
    solver.solve(x, y);
    double norm = 0.0;
    for (const auto& v : y) norm += std::norm(v);
    norm = std::sqrt(norm * dx);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;

    WaveFunction psi(grid, x);
    const auto h = apply_hamiltonian(psi, static_pot, units);
    Complex rq{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) rq += std::conj(x[i]) * h[i];
    energy = (rq * dx).real();
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(h[i] - energy * x[i]));
    if (resid <= 1e-13 * std::max(1.0, std::abs(energy)) * std::sqrt(1.0 / grid.length())) break;
  }

  // Real, positive gauge.
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
  }
  const Complex gauge = std::abs(x[imax]) / x[imax];
  for (auto& v : x) v = Complex{(v * gauge).real(), 0.0};
  WaveFunction psi(grid, std::move(x));
  psi.normalize();
  return {energy, std::move(psi)};
}

}  // namespace dstc
