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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dstc/collapse.hpp"
#include "dstc/rng.hpp"
#include "dstc/units.hpp"

namespace dstc {

// Superposition sqrt(alpha) psi_1 + sqrt(1 - alpha) psi_2 of two stationary
// states in separate regions, possibly partially decohered.
struct TwoLevelState {
  double alpha = 0.5;
  double coherence = 0.5;  // |rho_12|, at most sqrt(alpha beta)
  double E1 = 0.0;
  double E2 = 0.0;

  static TwoLevelState pure(double alpha, double E1, double E2);
  double beta() const noexcept { return 1.0 - alpha; }
  double dE() const noexcept { return E2 - E1; }
  void validate() const;
};

// One Planck-time step of the level-1 measure: up by lambda (1 - alpha) with
// probability alpha (u < alpha), otherwise down by lambda alpha.
inline double walk_step(double alpha, double lambda, double u) noexcept {
  return u < alpha ? alpha + lambda * (1.0 - alpha) : alpha - lambda * alpha;
}

inline double walk_step(double alpha, double lambda, CounterRng& rng) noexcept {
  return walk_step(alpha, lambda, rng.uniform());
}

// Exact one-step mean E[walk_step(alpha)] - alpha (zero up to rounding).
double walk_drift(double alpha, double lambda) noexcept;

struct WalkOptions {
  // Per-walk step budget; 0 picks 200 / lambda^2.
  std::uint64_t max_steps = 0;
  unsigned threads = 1;
};

struct AbsorptionResult {
  double alpha0 = 0.0;
  double dE = 0.0;
  double lambda = 0.0;
  std::size_t n_walks = 0;
  std::size_t n_upper = 0;
  std::size_t n_lower = 0;
  std::size_t n_unterminated = 0;
  double absorption_freq = 0.0;  // n_upper / n_walks
  double ci95 = 0.0;             // half-width, normal approximation
  double mean_steps = 0.0;       // over terminated walks
  double stddev_steps = 0.0;
};

// Fraction of walks from alpha0 that reach 1 - eps before eps. Walk i uses
// stream CounterRng(cfg.seed, i). Throws InconclusiveRunError when more than
// 1% of walks exhaust the step budget.
AbsorptionResult absorption_probability(double alpha0, double dE, const UnitSystem& units,
                                        const CollapseConfig& cfg, std::size_t n_walks,
                                        const WalkOptions& opts = {});

struct DensityMatrix2 {
  std::array<std::array<Complex, 2>, 2> m{};
  std::optional<std::string> warning;

  double trace() const noexcept { return (m[0][0] + m[1][1]).real(); }
  std::array<double, 2> eigenvalues() const noexcept;
};

// rho_11 = alpha, rho_22 = beta, rho_12 = rho_21 = max(0, 1 - dE^2 t / (2 k^2 hbar E_p)) * coherence.
// The linear form is a small-t expansion; beyond 0.5 tau_c the result carries
// a warning but is still evaluated.
DensityMatrix2 density_matrix(const TwoLevelState& state0, double t, const UnitSystem& units,
                              const CollapseConfig& cfg);

// tau_c = 2 k^2 hbar E_p / dE^2; nullopt means the state never collapses (dE = 0).
std::optional<double> collapse_time(double dE, const UnitSystem& units, const CollapseConfig& cfg);

struct CoherencePoint {
  std::uint64_t step = 0;
  double mean_rho = 0.0;
  double mean_coherence = 0.0;  // E[sqrt(rho (1 - rho))]
};

// Ensemble of walks from alpha0 recorded at the given (ascending) step counts.
std::vector<CoherencePoint> coherence_curve(double alpha0, double lambda, std::size_t n_walks,
                                            const std::vector<std::uint64_t>& record_steps, std::uint64_t seed,
                                            unsigned threads = 1);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dstc
