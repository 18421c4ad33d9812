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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dstc/grid.hpp"

namespace dstc {

// U(x_i, t) = u_i * modulation(t); a missing modulation means static U.
struct Potential {
  LatticeGrid grid;
  std::vector<double> u;
  std::function<double(double)> modulation;

  Potential(LatticeGrid g, std::vector<double> values,
            std::function<double(double)> mod = nullptr);

  static Potential zero(const LatticeGrid& g) { return Potential(g, std::vector<double>(g.size(), 0.0)); }

  bool time_dependent() const noexcept { return static_cast<bool>(modulation); }
  double scale(double t) const { return modulation ? modulation(t) : 1.0; }
};

// Builds a potential from a preset expression:
//   free | box | harmonic(omega) | double_well(a,b) | linear(force) | custom(csv_path)
// double_well is a (x^2 - b^2)^2, linear is -force x, box is U = 0 on a
// dirichlet grid, custom reads one "x,u" row per cell.
Potential make_potential(std::string_view preset, const LatticeGrid& grid, const UnitSystem& units);

struct PropagatorConfig {
  double dt;
  double solver_tolerance = 1e-12;
};

// Complex tridiagonal system with constant off-diagonal `off` and per-row
// diagonal; `cyclic` adds the corner couplings of a periodic lattice. The
// factorization is computed once and reused for every right-hand side.
class TridiagonalSolver {
 public:
  TridiagonalSolver(std::vector<Complex> diag, Complex off, bool cyclic);
  void solve(std::span<const Complex> rhs, std::span<Complex> x) const;
  // y = M x for the same matrix (used for residual checks).
  void multiply(std::span<const Complex> x, std::span<Complex> y) const;

 private:
  void factor();
  void solve_plain(std::span<const Complex> rhs, std::span<Complex> x) const;

  std::vector<Complex> diag_;  // diagonal actually factored (cyclic-modified)
  std::vector<Complex> orig_diag_;
  Complex off_;
  bool cyclic_;
  std::vector<Complex> cprime_;
  std::vector<Complex> inv_denom_;
  // Sherman-Morrison pieces for the cyclic case.
  Complex gamma_{};
  std::vector<Complex> z_;
  Complex vz_denom_{};
};

// Crank-Nicolson: (1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi.
// Unitary and second order in dt and dx. A time-dependent potential is
// sampled at the step midpoint. Instances keep their factorization and are
// not meant to be shared between threads.
class CrankNicolson {
 public:
  CrankNicolson(const Potential& pot, const UnitSystem& units, PropagatorConfig cfg);

  void step_in_place(WaveFunction& psi);
  WaveFunction step(const WaveFunction& psi);

  double dt() const noexcept { return cfg_.dt; }

 private:
  void build(double t_mid);

  Potential pot_;
  double hbar_;
  double kinetic_diag_;  // hbar^2 / (m dx^2)
  double hop_;           // -hbar^2 / (2 m dx^2)
  PropagatorConfig cfg_;
  std::optional<TridiagonalSolver> solver_;
  double built_for_ = 0.0;
  std::vector<Complex> rhs_, next_, check_;
};

// One step. Throws NumericalError if the linear solve misses its tolerance.
WaveFunction step(const WaveFunction& psi, const Potential& pot, const UnitSystem& units,
                  const PropagatorConfig& cfg);

// H psi with H = -(hbar^2 / 2m) D2 + U(t), D2 the three-point Laplacian.
std::vector<Complex> apply_hamiltonian(const WaveFunction& psi, const Potential& pot,
                                       const UnitSystem& units);
void apply_hamiltonian_into(const WaveFunction& psi, const Potential& pot, const UnitSystem& units,
                            std::vector<Complex>& out);

// <psi|H|psi>. Throws NumericalError if the imaginary part exceeds 1e-10.
double energy_expectation(const WaveFunction& psi, const Potential& pot, const UnitSystem& units);

// e_i = Re(conj(psi_i) (H psi)_i) / rho_i where rho_i exceeds the grid's
// rho_floor; other cells are flagged undefined.
struct LocalEnergyField {
  std::vector<double> energy;
  std::vector<bool> defined;
};
LocalEnergyField local_energy_density(const WaveFunction& psi, const Potential& pot,
                                      const UnitSystem& units);

// Eigenvalue of the three-point kinetic operator on exp(i p x / hbar):
// (hbar^2 / (m dx^2)) (1 - cos(p dx / hbar)).
double discrete_kinetic_energy(double p, double dx, const UnitSystem& units);

// Phase acquired per Crank-Nicolson step by an eigenvector of energy E:
// -2 atan(E dt / (2 hbar)).
double crank_nicolson_phase(double energy, double dt, double hbar);

struct Eigenpair {
  double energy;
  WaveFunction state;
};

// Eigenvector of the lattice Hamiltonian (static part) whose eigenvalue is
// nearest `shift`, by shifted inverse iteration. The result is real,
// normalized and has a positive largest component.
Eigenpair nearest_eigenstate(const Potential& pot, const UnitSystem& units, double shift);

}  // namespace dstc
