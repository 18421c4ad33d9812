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

#include <iosfwd>
#include <string>

#include "dstc/grid.hpp"
#include "dstc/spectral.hpp"
#include "dstc/units.hpp"

namespace dstc {

// Shortest text for a double: 17 significant digits, enough to round-trip.
std::string format_double(double v);

// JSON object echoing every constant of `units`.
std::string units_json(const UnitSystem& units);
UnitSystem units_from_json(const std::string& json);

// Wavefunction file: first line "# " + JSON metadata (grid, time, units),
// then "x,re_psi,im_psi" and one row per cell with 17 significant digits.
void write_wavefunction_csv(std::ostream& out, const WaveFunction& psi, const UnitSystem& units);

struct LoadedWaveFunction {
  WaveFunction psi;
  UnitSystem units;
};
LoadedWaveFunction read_wavefunction_csv(std::istream& in);

// Momentum file: "# " + JSON metadata, then "p,re,im,f".
void write_momentum_csv(std::ostream& out, const MomentumState& phi, const UnitSystem& units);

}  // namespace dstc
