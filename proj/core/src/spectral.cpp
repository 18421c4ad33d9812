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

#include "dstc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "dstc/error.hpp"

namespace dstc {

namespace {

// FFTW planning is not thread-safe; execution on fresh arrays is. Plans are
// created once per (size, direction) under a lock and reused by every thread.
// FFTW_ESTIMATE keeps the chosen algorithm, and therefore the output bits,
// independent of timing.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

void execute(std::vector<Complex>& data, int sign) {
  auto plan = PlanCache::instance().get(data.size(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void require_periodic(const LatticeGrid& grid, const char* where) {
  if (!grid.periodic()) {
    throw UsageError(std::string(where) + ": spectral operations need a periodic grid");
  }
}

// Signed wavenumber index of centered bin j.
long centered_index(std::size_t j, std::size_t n) {
  return static_cast<long>(j) - static_cast<long>(n / 2);
}

std::size_t fft_slot(long k, std::size_t n) {
  const long nn = static_cast<long>(n);
  return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

}  // namespace

double MomentumState::dp() const noexcept {
  return 2.0 * std::numbers::pi * hbar / grid.length();
}

double MomentumState::p(std::size_t j) const noexcept {
  return dp() * static_cast<double>(centered_index(j, grid.size()));
}

std::vector<double> MomentumState::density() const {
  std::vector<double> f(amp.size());
  for (std::size_t j = 0; j < amp.size(); ++j) f[j] = std::norm(amp[j]);
  return f;
}

double MomentumState::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return s * dp();
}

MomentumState to_momentum(const WaveFunction& psi, double hbar) {
  require_periodic(psi.grid, "to_momentum");
  const std::size_t n = psi.grid.size();
  std::vector<Complex> work = psi.amp;
  execute(work, FFTW_FORWARD);

  MomentumState phi{psi.grid, hbar, std::vector<Complex>(n), psi.time};
  const double scale = psi.grid.dx() / std::sqrt(2.0 * std::numbers::pi * hbar);
  for (std::size_t j = 0; j < n; ++j) {
    const long k = centered_index(j, n);
    // exp(-i p x_min / hbar) restores the absolute position origin.
    const double origin = -phi.p(j) * psi.grid.x_min() / hbar;
    phi.amp[j] = scale * std::polar(1.0, origin) * work[fft_slot(k, n)];
  }
  return phi;
}

WaveFunction from_momentum(const MomentumState& phi) {
  require_periodic(phi.grid, "from_momentum");
  const std::size_t n = phi.grid.size();
  std::vector<Complex> work(n);
  for (std::size_t j = 0; j < n; ++j) {
    const long k = centered_index(j, n);
    const double origin = phi.p(j) * phi.grid.x_min() / phi.hbar;
    work[fft_slot(k, n)] = std::polar(1.0, origin) * phi.amp[j];
  }
  execute(work, FFTW_BACKWARD);
  // Inverse of dx / sqrt(2 pi hbar) combined with FFTW's unnormalized N.
  const double scale = std::sqrt(2.0 * std::numbers::pi * phi.hbar) /
                       (phi.grid.dx() * static_cast<double>(n));
  for (auto& a : work) a *= scale;
  return WaveFunction(phi.grid, std::move(work), phi.time);
}

MomentumState free_phase_advance(const MomentumState& phi, double t, double mass) {
  if (!(t >= 0.0)) throw DomainError("free_phase_advance: t must be non-negative");
  if (!(mass > 0.0)) throw DomainError("free_phase_advance: mass must be positive");
  MomentumState out = phi;
  for (std::size_t j = 0; j < out.amp.size(); ++j) {
    const double p = out.p(j);
    out.amp[j] *= std::polar(1.0, -p * p * t / (2.0 * mass * out.hbar));
  }
  out.time += t;
  return out;
}

MomentumMoments momentum_moments(const MomentumState& phi) {
  MomentumMoments m{0.0, 0.0};
  for (std::size_t j = 0; j < phi.amp.size(); ++j) {
    const double w = std::norm(phi.amp[j]);
    const double p = phi.p(j);
    m.mean += w * p;
    m.mean_square += w * p * p;
  }
  const double dp = phi.dp();
  m.mean *= dp;
  m.mean_square *= dp;
  return m;
}

}  // namespace dstc
