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

#include "dstc/units.hpp"

#include <cmath>
#include <string>

#include "dstc/error.hpp"

namespace dstc {

std::string_view to_string(UnitMode mode) {
  return mode == UnitMode::kSI ? "SI" : "scaled";
}

UnitMode parse_unit_mode(std::string_view text) {
  if (text == "SI" || text == "si") return UnitMode::kSI;
  if (text == "scaled") return UnitMode::kScaled;
  throw UsageError("unknown unit mode '" + std::string(text) + "' (expected SI or scaled)");
}

PlanckScales planck_scales(double c, double G, double hbar) {
  if (!(c > 0.0) || !(G > 0.0) || !(hbar > 0.0)) {
    throw DomainError("planck_scales: c, G and hbar must be positive");
  }
  const double time = std::sqrt(G * hbar / (c * c * c * c * c));
  return {c * time, time};
}

LengthUncertainty min_length_uncertainty(double length, double clock_mass, double c, double G,
                                         double hbar) {
  if (!(length > 0.0) || !(clock_mass > 0.0)) {
    throw DomainError("min_length_uncertainty: length and clock mass must be positive");
  }
  const double lp = planck_scales(c, G, hbar).length;
  LengthUncertainty out;
  out.quantum = std::sqrt(hbar * length / (clock_mass * c));
  out.gravitational = G * clock_mass / (c * c);
  out.total = std::cbrt(length * lp * lp);
  return out;
}

UnitSystem UnitSystem::si(double particle_mass) {
  if (!(particle_mass > 0.0)) throw DomainError("UnitSystem::si: particle mass must be positive");
  UnitSystem u;
  u.mode_ = UnitMode::kSI;
  u.hbar_ = codata::kHbar;
  u.mass_ = particle_mass;
  u.c_ = codata::kSpeedOfLight;
  u.G_ = codata::kGravitation;
  const auto scales = planck_scales(*u.c_, *u.G_, u.hbar_);
  u.planck_time_ = scales.time;
  u.planck_length_ = scales.length;
  u.planck_energy_ = u.hbar_ / u.planck_time_;
  return u;
}

UnitSystem UnitSystem::scaled(double planck_energy) {
  if (!(planck_energy > 0.0) || !std::isfinite(planck_energy)) {
    throw DomainError("UnitSystem::scaled: Planck energy must be positive and finite");
  }
  UnitSystem u;
  u.mode_ = UnitMode::kScaled;
  u.planck_energy_ = planck_energy;
  u.planck_time_ = u.hbar_ / planck_energy;
  u.planck_length_ = u.planck_time_;
  return u;
}

LengthUncertainty UnitSystem::min_length_uncertainty(double length, double clock_mass) const {
  if (mode_ != UnitMode::kSI) {
    throw UsageError("min_length_uncertainty needs c and G; only available in SI mode");
  }
  return dstc::min_length_uncertainty(length, clock_mass, *c_, *G_, hbar_);
}

}  // namespace dstc
