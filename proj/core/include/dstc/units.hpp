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

#include <optional>
#include <string_view>

namespace dstc {

enum class UnitMode { kSI, kScaled };

std::string_view to_string(UnitMode mode);
UnitMode parse_unit_mode(std::string_view text);

// CODATA 2018, SI.
namespace codata {
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s (exact)
inline constexpr double kGravitation = 6.67430e-11;           // m^3 kg^-1 s^-2
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kElectronMass = 9.1093837015e-31;     // kg
inline constexpr double kElectronVolt = 1.602176634e-19;      // J (exact)
inline constexpr double kGeV = 1e9 * kElectronVolt;           // J
}  // namespace codata

struct PlanckScales {
  double length;
  double time;
};

// L_p = sqrt(G hbar / c^3), T_p = sqrt(G hbar / c^5). Throws DomainError on non-positive input.
PlanckScales planck_scales(double c, double G, double hbar);

// Lower bounds on the uncertainty of a light-clock length measurement of L
// with a clock of mass m: quantum sqrt(hbar L / (m c)), gravitational G m / c^2,
// and the mass-independent combined bound (L L_p^2)^(1/3).
struct LengthUncertainty {
  double quantum;
  double gravitational;
  double total;
};

// Physical constants shared by every module.
//
// SI mode carries CODATA values and derives the Planck scales from c, G and hbar.
// Scaled mode fixes hbar = m = 1 and treats the Planck energy as a free
// parameter, T_p = hbar / E_p; c and G are absent and L_p is reported as
// c T_p with c = 1. In both modes planck_energy() * planck_time() == hbar().
class UnitSystem {
 public:
  static UnitSystem si(double particle_mass = codata::kElectronMass);
  static UnitSystem scaled(double planck_energy);

  UnitMode mode() const noexcept { return mode_; }
  double hbar() const noexcept { return hbar_; }
  double mass() const noexcept { return mass_; }
  double planck_energy() const noexcept { return planck_energy_; }
  double planck_time() const noexcept { return planck_time_; }
  double planck_length() const noexcept { return planck_length_; }
  std::optional<double> speed_of_light() const noexcept { return c_; }
  std::optional<double> grav_constant() const noexcept { return G_; }

  // SI mode only; throws UsageError in scaled mode.
  LengthUncertainty min_length_uncertainty(double length, double clock_mass) const;

 private:
  UnitSystem() = default;

  UnitMode mode_ = UnitMode::kScaled;
  double hbar_ = 1.0;
  double mass_ = 1.0;
  double planck_energy_ = 1.0;
  double planck_time_ = 1.0;
  double planck_length_ = 1.0;
  std::optional<double> c_;
  std::optional<double> G_;
};

// Free-function form with explicit constants.
LengthUncertainty min_length_uncertainty(double length, double clock_mass, double c, double G,
                                         double hbar);

}  // namespace dstc
