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
#include <limits>

namespace dstc {

// Philox4x64-10 (Salmon, Moraes, Dror, Shaw; SC'11): a counter-based
// generator. Output block = bijection(counter, key); no hidden state beyond
// the counter, so any stream position is reachable in O(1).
struct Philox4x64 {
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const auto [hi0, lo0] = mulhilo(kMul0, ctr[0]);
      const auto [hi1, lo1] = mulhilo(kMul1, ctr[2]);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  struct HiLo {
    std::uint64_t hi, lo;
  };
  __extension__ using Wide = unsigned __int128;

  static HiLo mulhilo(std::uint64_t a, std::uint64_t b) noexcept {
    const Wide p = static_cast<Wide>(a) * b;
    return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
  }
};

// One independent random stream. Stream (seed, index) uses Philox key
// {seed ^ index, 0} and walks the counter from zero, so a trajectory's draws
// depend only on its own index and never on scheduling.
//
// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream_index) noexcept
      : key_{seed ^ stream_index, 0} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t blocks_consumed() const noexcept { return counter_; }

 private:
  void refill() noexcept {
    buffer_ = Philox4x64::block({counter_, 0, 0, 0}, key_);
    ++counter_;
    pos_ = 0;
  }

  Philox4x64::Key key_;
  std::uint64_t counter_ = 0;
  Philox4x64::Counter buffer_{};
  int pos_ = 4;
};

}  // namespace dstc
