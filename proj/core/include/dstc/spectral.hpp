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

#include <vector>

#include "dstc/grid.hpp"

namespace dstc {

// Momentum-space amplitudes on the grid conjugate to a periodic LatticeGrid.
//
// Bin j holds p_j = 2 pi hbar (j - N/2) / (N dx), so p = 0 sits at j = N/2.
// amp_j = dx / sqrt(2 pi hbar) * sum_i psi_i exp(-i p_j x_i / hbar); the
// transform is unitary between the dx- and dp-weighted inner products.
struct MomentumState {
  LatticeGrid grid;  // position grid this state is conjugate to
  double hbar = 1.0;
  std::vector<Complex> amp;
  double time = 0.0;

  double dp() const noexcept;
  double p(std::size_t j) const noexcept;
  std::size_t zero_bin() const noexcept { return grid.size() / 2; }
  // |amp_j|^2
  std::vector<double> density() const;
  // sum |amp|^2 dp
  double norm_squared() const noexcept;
};

// Position grid must be periodic; dirichlet grids throw UsageError.
MomentumState to_momentum(const WaveFunction& psi, double hbar);
WaveFunction from_momentum(const MomentumState& phi);

// amp_j *= exp(-i p_j^2 t / (2 m hbar)).
MomentumState free_phase_advance(const MomentumState& phi, double t, double mass);

// <p> and <p^2> from the momentum density.
struct MomentumMoments {
  double mean;
  double mean_square;
};
MomentumMoments momentum_moments(const MomentumState& phi);

}  // namespace dstc
