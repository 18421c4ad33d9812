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

#include "dstc/collapse.hpp"
#include "dstc/units.hpp"

namespace dstc {

// Two Gaussian slits of rms width `slit_width` centred at +-separation/2 on
// a periodic lattice, propagated freely to `screen_time` with dt = T_p.
struct DoubleSlitSpec {
  double separation = 10.0;
  double slit_width = 0.5;
  double screen_time = 20.0;
  std::size_t n_cells = 1024;
  double dx = 0.2;
};

struct DoubleSlitResult {
  std::vector<double> x;
  std::vector<double> pattern;  // coherent |psi|^2, or its ensemble mean with collapse on
  std::vector<double> mixture;  // (|psi_1|^2 + |psi_2|^2) / 2, each slit evolved alone
  double window_half_width = 0.0;  // visibility window |x| <= 0.55 fringe spacings
  double visibility_pattern = 0.0;
  double visibility_mixture = 0.0;
  double max_pointwise_diff = 0.0;
  double l1_distance = 0.0;  // sum |pattern - mixture| dx
  std::size_t n_traj = 0;
};

// (max - min) / (max + min) of `density` over |x| <= half_width.
double visibility(const std::vector<double>& x, const std::vector<double>& density, double half_width);

// collapse_on = false evolves (psi_1 + psi_2)/sqrt(2) unitarily. With
// collapse_on the lattice is split into two Planck cells (one per slit) and
// `n_traj` collapse trajectories are averaged.
DoubleSlitResult double_slit(const DoubleSlitSpec& spec, bool collapse_on, const UnitSystem& units,
                             const CollapseConfig& cfg, std::size_t n_traj = 0, unsigned threads = 1);

}  // namespace dstc
