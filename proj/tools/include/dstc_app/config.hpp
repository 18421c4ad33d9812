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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dstc/grid.hpp"
#include "dstc/units.hpp"

namespace dstc::app {

struct KeySpec {
  std::string key;  // "section.name"
  std::string default_value;
  std::string help;
};

// Every tunable of every command, as `section.name = value` text. Values stay
// strings until a command reads them, so a config echo reloads to the exact
// same run. Thread count and output location are not part of the config:
// they must not change results.
class RunConfig {
 public:
  RunConfig();

  static const std::vector<KeySpec>& keys();

  // Throws UsageError for keys outside keys().
  void set(std::string_view key, std::string value);
  const std::string& raw(std::string_view key) const;
  bool is(std::string_view key, std::string_view word) const { return raw(key) == word; }

  // Typed reads; failures throw UsageError naming the key.
  double real(std::string_view key) const;
  double positive(std::string_view key) const;
  double non_negative(std::string_view key) const;
  double probability(std::string_view key) const;  // open interval (0, 1)
  std::uint64_t count(std::string_view key) const;
  std::optional<double> real_or(std::string_view key, std::string_view sentinel) const;
  std::vector<double> real_list(std::string_view key) const;
  // Energy in the active unit system; in SI mode "eV" and "GeV" suffixes are accepted.
  double energy(std::string_view key) const;

  std::uint64_t seed() const { return count("run.seed"); }
  UnitSystem units() const;
  LatticeGrid grid() const;

  // {"section": {"name": "value", ...}, ...}
  nlohmann::json echo() const;
  // "# config " + one-line echo, for CSV headers.
  std::string csv_header() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// Reads `key = value` lines under `[section]` headers; '#' and ';' start
// comments. A text starting with '{' is read as a JSON config echo instead.
// Throws UsageError with a line number on malformed input.
void apply_config_text(RunConfig& cfg, std::string_view text);

// Command presets. Every command has "default"; returns false for unknown names.
bool apply_preset(RunConfig& cfg, std::string_view command, std::string_view preset);
std::vector<std::string> preset_names(std::string_view command);

}  // namespace dstc::app
