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

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dstc/units.hpp"

namespace dstc {

using Complex = std::complex<double>;

enum class Boundary { kPeriodic, kDirichlet };

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

// Uniform 1D lattice. Cell i sits at x_min + i*dx. A periodic grid identifies
// cell n_cells with cell 0; a dirichlet grid has implicit zero cells at -1 and
// n_cells.
class LatticeGrid {
 public:
  LatticeGrid(std::size_t n_cells, double dx, double x_min, Boundary boundary);

  std::size_t size() const noexcept { return n_cells_; }
  double dx() const noexcept { return dx_; }
  double x_min() const noexcept { return x_min_; }
  Boundary boundary() const noexcept { return boundary_; }
  double length() const noexcept { return static_cast<double>(n_cells_) * dx_; }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  bool periodic() const noexcept { return boundary_ == Boundary::kPeriodic; }

  // Density below which a cell counts as nodal: 1e-12 of the uniform density.
  double rho_floor() const noexcept { return 1e-12 / length(); }

  friend bool operator==(const LatticeGrid&, const LatticeGrid&) = default;

 private:
  std::size_t n_cells_;
  double dx_;
  double x_min_;
  Boundary boundary_;
};

struct WaveFunction {
  LatticeGrid grid;
  std::vector<Complex> amp;
  double time = 0.0;

  WaveFunction(LatticeGrid g, std::vector<Complex> a, double t = 0.0);

  // sum |amp|^2 dx
  double norm_squared() const noexcept;
  void normalize();
  bool is_normalized(double tol = 1e-9) const noexcept { return std::abs(norm_squared() - 1.0) <= tol; }
};

// Throws UsageError naming `where` when psi is not normalized within 1e-9.
void require_normalized(const WaveFunction& psi, std::string_view where);
void require_same_grid(const LatticeGrid& a, const LatticeGrid& b, std::string_view where);

// sum conj(a) b dx
Complex inner_product(const WaveFunction& a, const WaveFunction& b);

// Normalized exp(-(x - x0)^2 / (4 sigma^2) + i p0 x / hbar); sigma is the rms
// width of |psi|^2.
WaveFunction gaussian_packet(const LatticeGrid& grid, double x0, double sigma, double p0, double hbar);

struct MeasureField {
  LatticeGrid grid;
  std::vector<double> rho;   // |psi|^2
  std::vector<double> flux;  // (hbar/m) Im(conj(psi) dpsi/dx)
};

// First spatial derivative: central differences in the interior (and across
// the seam of a periodic grid), one-sided second-order stencils at dirichlet
// edges.
std::vector<Complex> derivative(const LatticeGrid& grid, std::span<const Complex> f);
std::vector<double> derivative(const LatticeGrid& grid, std::span<const double> f);

MeasureField extract_measures(const WaveFunction& psi, const UnitSystem& units);

// S(x) = m * integral_{x_min}^{x} j/rho dx' (trapezoid), S(x_min) = 0.
// Throws NodalRegionError if rho drops below the grid's rho_floor anywhere.
std::vector<double> reconstruct_phase(const MeasureField& mf, double mass);

// sqrt(rho) exp(i S / hbar), normalized.
WaveFunction rebuild_wavefunction(const MeasureField& mf, std::span<const double> phase, double hbar,
                                  double time = 0.0);

struct ContinuityResidual {
  std::vector<double> field;
  double max_norm = 0.0;
};

// (rho(t2) - rho(t1)) / (t2 - t1) + d/dx [ (j(t1) + j(t2)) / 2 ] per cell.
ContinuityResidual continuity_residual(const WaveFunction& psi_t1, const WaveFunction& psi_t2,
                                       const UnitSystem& units);

}  // namespace dstc
