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

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dstc::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct CliResult {
  int exit_code = kExitOk;
  std::optional<std::filesystem::path> run_dir;
};

// Full command line without the program name, e.g. {"--seed", "3", "collapse"}.
// Config layering, lowest to highest: key defaults, --preset, --config file,
// --set overrides, --seed.
CliResult run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Creates <base>/<UTC timestamp>-seed<N>, appending -2, -3, ... rather than
// reusing an existing directory.
std::filesystem::path create_run_dir(const std::filesystem::path& base, std::uint64_t seed);

}  // namespace dstc::app
