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

#include <string>
#include <string_view>
#include <vector>

#include "dstc_app/config.hpp"
#include "json.hpp"

namespace dstc::app {

struct OutputFile {
  std::string name;
  std::string content;
};

// Everything a command produces. Commands compute in memory and never touch
// the filesystem, so a failing run leaves nothing behind.
struct CommandOutput {
  int exit_code = 0;  // 0 success, 1 a check failed
  std::vector<OutputFile> files;
  nlohmann::json summary;
  std::string text;
};

CommandOutput cmd_evolve(const RunConfig& cfg, unsigned threads);
CommandOutput cmd_collapse(const RunConfig& cfg, unsigned threads);
CommandOutput cmd_twolevel(const RunConfig& cfg, unsigned threads);
CommandOutput cmd_doubleslit(const RunConfig& cfg, unsigned threads);
CommandOutput cmd_verify(const RunConfig& cfg, unsigned threads);
CommandOutput cmd_planck(const RunConfig& cfg, unsigned threads);

const std::vector<std::string>& command_names();
CommandOutput run_command(std::string_view name, const RunConfig& cfg, unsigned threads);

}  // namespace dstc::app
