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

#include "dstc/two_level.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dstc/error.hpp"
#include "dstc/parallel.hpp"

namespace dstc {

TwoLevelState TwoLevelState::pure(double alpha, double E1, double E2) {
  TwoLevelState s{alpha, std::sqrt(std::max(0.0, alpha * (1.0 - alpha))), E1, E2};
  s.validate();
  return s;
}

void TwoLevelState::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("TwoLevelState: alpha must lie in [0, 1]");
  if (!(coherence >= 0.0) || coherence > std::sqrt(alpha * beta()) + 1e-12) {
    throw DomainError("TwoLevelState: coherence must lie in [0, sqrt(alpha beta)]");
  }
}

double walk_drift(double alpha, double lambda) noexcept {
  const double a = lambda * (1.0 - alpha);
  const double b = lambda * alpha;
  return alpha * a - (1.0 - alpha) * b;
}

AbsorptionResult absorption_probability(double alpha0, double dE, const UnitSystem& units,
                                        const CollapseConfig& cfg, std::size_t n_walks,
                                        const WalkOptions& opts) {
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw DomainError("absorption_probability: alpha0 must lie in (0, 1)");
  if (n_walks < 1) throw DomainError("absorption_probability: need at least one walk");
  if (!(dE >= 0.0)) throw DomainError("absorption_probability: dE must be non-negative");
  if (!(cfg.eps > 0.0 && cfg.eps < 0.5)) throw UsageError("absorption_probability: eps must lie in (0, 0.5)");

  AbsorptionResult res;
  res.alpha0 = alpha0;
  res.dE = dE;
  res.lambda = collapse_fraction(dE, units, cfg);
  res.n_walks = n_walks;
  const double lambda = res.lambda;
  const double lo = cfg.eps;
  const double hi = 1.0 - cfg.eps;

  // outcome: +1 upper, -1 lower, 0 budget exhausted
  std::vector<int> outcome(n_walks, 0);
  std::vector<std::uint64_t> steps(n_walks, 0);
  if (lambda > 0.0) {
    const std::uint64_t budget =
        opts.max_steps ? opts.max_steps
                       : static_cast<std::uint64_t>(std::min(1e12, std::ceil(200.0 / (lambda * lambda))));
    parallel_for(n_walks, opts.threads, [&](std::size_t i) {
      CounterRng rng(cfg.seed, i);
      double rho = alpha0;
      std::uint64_t s = 0;
      while (s < budget) {
        rho = walk_step(rho, lambda, rng);
        ++s;
        if (rho >= hi) {
          outcome[i] = 1;
          break;
        }
        if (rho <= lo) {
          outcome[i] = -1;
          break;
        }
      }
      steps[i] = s;
    });
  }

  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n_walks; ++i) {
    if (outcome[i] == 0) {
      ++res.n_unterminated;
      continue;
    }
    (outcome[i] > 0 ? res.n_upper : res.n_lower) += 1;
    const double s = static_cast<double>(steps[i]);
    sum += s;
    sum2 += s * s;
  }
  const double n = static_cast<double>(n_walks);
  res.absorption_freq = static_cast<double>(res.n_upper) / n;
  res.ci95 = 1.96 * std::sqrt(res.absorption_freq * (1.0 - res.absorption_freq) / n);
  const std::size_t done = res.n_upper + res.n_lower;
  if (done > 0) {
    res.mean_steps = sum / static_cast<double>(done);
    res.stddev_steps = std::sqrt(std::max(0.0, sum2 / static_cast<double>(done) - res.mean_steps * res.mean_steps));
  }
  if (static_cast<double>(res.n_unterminated) > 0.01 * n) {
    throw InconclusiveRunError("absorption_probability: " + std::to_string(res.n_unterminated) + " of " +
                               std::to_string(n_walks) + " walks exhausted the step budget");
  }
  return res;
}

std::array<double, 2> DensityMatrix2::eigenvalues() const noexcept {
  const double a = m[0][0].real();
  const double d = m[1][1].real();
  const double off = std::norm(m[0][1]);
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + off);
  return {mean - disc, mean + disc};
}

DensityMatrix2 density_matrix(const TwoLevelState& state0, double t, const UnitSystem& units,
                              const CollapseConfig& cfg) {
  state0.validate();
  if (!(t >= 0.0)) throw DomainError("density_matrix: t must be non-negative");
  DensityMatrix2 out;
  const double dE = std::abs(state0.dE());
  const double slope = dE * dE / (2.0 * cfg.k * cfg.k * units.hbar() * units.planck_energy());
  const double factor = std::max(0.0, 1.0 - slope * t);
  const double off = factor * state0.coherence;
  out.m[0][0] = state0.alpha;
  out.m[1][1] = state0.beta();
  out.m[0][1] = off;
  out.m[1][0] = off;
  if (const auto tau = collapse_time(dE, units, cfg); tau && t > 0.5 * *tau) {
    out.warning = "t = " + std::to_string(t) + " exceeds the linearization window 0.5 tau_c = " +
                  std::to_string(0.5 * *tau) + "; extrapolated";
  }
  return out;
}

std::optional<double> collapse_time(double dE, const UnitSystem& units, const CollapseConfig& cfg) {
  if (!(dE >= 0.0) && !(dE < 0.0)) throw DomainError("collapse_time: dE is NaN");
  if (dE == 0.0) return std::nullopt;
  return 2.0 * cfg.k * cfg.k * units.hbar() * units.planck_energy() / (dE * dE);
}

std::vector<CoherencePoint> coherence_curve(double alpha0, double lambda, std::size_t n_walks,
                                            const std::vector<std::uint64_t>& record_steps, std::uint64_t seed,
                                            unsigned threads) {
  if (!std::is_sorted(record_steps.begin(), record_steps.end())) {
    throw UsageError("coherence_curve: record steps must be ascending");
  }
  const std::size_t nr = record_steps.size();
  std::vector<double> rho_at(n_walks * nr), coh_at(n_walks * nr);
  parallel_for(n_walks, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    double rho = alpha0;
    std::uint64_t s = 0;
    for (std::size_t r = 0; r < nr; ++r) {
      for (; s < record_steps[r]; ++s) rho = walk_step(rho, lambda, rng);
      rho_at[i * nr + r] = rho;
      coh_at[i * nr + r] = std::sqrt(rho * (1.0 - rho));
    }
  });
  std::vector<CoherencePoint> out(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    out[r].step = record_steps[r];
    for (std::size_t i = 0; i < n_walks; ++i) {
      out[r].mean_rho += rho_at[i * nr + r];
      out[r].mean_coherence += coh_at[i * nr + r];
    }
    out[r].mean_rho /= static_cast<double>(n_walks);
    out[r].mean_coherence /= static_cast<double>(n_walks);
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("fit_slope: need two or more matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace dstc
