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


// Planck scales and length-uncertainty bounds against CODATA 2018 values.

#include <cmath>
#include <limits>

#include "doctest.h"
#include "dstc/error.hpp"
#include "dstc/units.hpp"

using namespace dstc;

TEST_CASE("planck scales from CODATA constants") {
  // Published CODATA 2018: l_P = 1.616255(18)e-35 m, t_P = 5.391247(60)e-44 s.
  const auto s = planck_scales(codata::kSpeedOfLight, codata::kGravitation, codata::kHbar);
  CHECK(s.length == doctest::Approx(1.616255e-35).epsilon(1e-6));
  CHECK(s.time == doctest::Approx(5.391247e-44).epsilon(1e-6));
  CHECK(s.length / s.time == doctest::Approx(codata::kSpeedOfLight).epsilon(1e-14));
}

TEST_CASE("planck scales reject non-physical constants") {
  CHECK_THROWS_AS(planck_scales(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(planck_scales(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(planck_scales(1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(planck_scales(std::numeric_limits<double>::quiet_NaN(), 1.0, 1.0), DomainError);
}

TEST_CASE("si unit system carries the Planck energy E_p = hbar / T_p") {
  const auto u = UnitSystem::si();
  CHECK(u.mode() == UnitMode::kSI);
  // 30-digit evaluation of sqrt(hbar c^5 / G) = 1.95608163609910845e9 J = 1.2209e19 GeV.
  CHECK(u.planck_energy() == doctest::Approx(1.95608163609910845e9).epsilon(1e-12));
  CHECK(u.planck_energy() / codata::kGeV == doctest::Approx(1.2208901282e19).epsilon(1e-9));
  CHECK(u.planck_energy() * u.planck_time() == doctest::Approx(u.hbar()).epsilon(1e-14));
  CHECK(u.mass() == codata::kElectronMass);
  REQUIRE(u.speed_of_light());
  REQUIRE(u.grav_constant());
}

TEST_CASE("scaled unit system: hbar = m = 1 and T_p = 1 / E_p") {
  const auto u = UnitSystem::scaled(250.0);
  CHECK(u.mode() == UnitMode::kScaled);
  CHECK(u.hbar() == 1.0);
  CHECK(u.mass() == 1.0);
  CHECK(u.planck_time() == doctest::Approx(1.0 / 250.0).epsilon(1e-15));
  CHECK(u.planck_energy() * u.planck_time() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(u.speed_of_light());
  CHECK_THROWS_AS(UnitSystem::scaled(0.0), DomainError);
  CHECK_THROWS_AS(UnitSystem::scaled(-3.0), DomainError);
}

TEST_CASE("unit mode round-trips through text") {
  CHECK(parse_unit_mode(to_string(UnitMode::kSI)) == UnitMode::kSI);
  CHECK(parse_unit_mode(to_string(UnitMode::kScaled)) == UnitMode::kScaled);
  CHECK_THROWS_AS(parse_unit_mode("furlongs"), UsageError);
}

TEST_CASE("length uncertainty at L = 1 m") {
  const auto u = UnitSystem::si();
  // (L L_p^2)^(1/3) with L_p = 1.61625502392855e-35 m: 6.39253712009441e-24 m.
  const auto r = u.min_length_uncertainty(1.0, 1.0);
  CHECK(r.total == doctest::Approx(6.39253712009441e-24).epsilon(1e-12));
  // Components at m = 1 kg: sqrt(hbar / c) and G / c^2.
  CHECK(r.quantum == doctest::Approx(5.93099733568543e-22).epsilon(1e-12));
  CHECK(r.gravitational == doctest::Approx(7.42616026911867e-28).epsilon(1e-12));
}

TEST_CASE("the combined bound is within a factor 2 of the best clock mass") {
  // sqrt(a/m) + b m is minimised at m* with value (3 / 2^(2/3)) (a b^2)^(1/3)
  // = 1.8899 (L L_p^2)^(1/3); scan masses and compare.
  const auto u = UnitSystem::si();
  for (double L : {1e-10, 1e-3, 1.0, 1e4}) {
    double best = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (double lg = -40.0; lg <= 40.0; lg += 0.01) {
      const auto r = u.min_length_uncertainty(L, std::pow(10.0, lg));
      best = std::min(best, r.quantum + r.gravitational);
      total = r.total;
    }
    CHECK(best / total == doctest::Approx(3.0 / std::cbrt(4.0)).epsilon(1e-4));
    CHECK(best / total < 2.0);
  }
}

TEST_CASE("length uncertainty needs si mode and positive arguments") {
  CHECK_THROWS_AS(UnitSystem::scaled(10.0).min_length_uncertainty(1.0, 1.0), UsageError);
  const auto u = UnitSystem::si();
  CHECK_THROWS_AS(u.min_length_uncertainty(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(u.min_length_uncertainty(1.0, -1.0), DomainError);
}
