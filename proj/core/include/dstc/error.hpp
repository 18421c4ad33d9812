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

#include <stdexcept>
#include <string>

namespace dstc {

// Input outside the mathematical domain of a formula (negative mass, rho > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller misuse: mismatched grids, unsupported boundary, bad configuration.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed its own accuracy check.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Phase reconstruction requested across a node of the density.
class NodalRegionError : public std::domain_error {
 public:
  NodalRegionError(const std::string& what, std::size_t cell)
      : std::domain_error(what), cell_(cell) {}
  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t cell_;
};

// Monte Carlo run whose statistics cannot be trusted (too many walks hit the step budget).
class InconclusiveRunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dstc
