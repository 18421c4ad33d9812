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


#include "dstc_app/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "dstc/error.hpp"
#include "dstc_app/commands.hpp"
#include "dstc_app/config.hpp"

namespace dstc::app {
namespace fs = std::filesystem;

fs::path create_run_dir(const fs::path& base, std::uint64_t seed) {
  fs::create_directories(base);
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  const std::string name = std::string(stamp) + "-seed" + std::to_string(seed);
  for (int attempt = 1;; ++attempt) {
    fs::path dir = base / (attempt == 1 ? name : name + "-" + std::to_string(attempt));
    if (fs::create_directory(dir)) return dir;
  }
}

CliResult run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete space-time collapse simulator", "dstc"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, preset = "default", out_dir = "runs";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool json_out = false;
  app.add_option("--config", config_path, "key = value config file, or a JSON config echo");
  app.add_option("--seed", seed, "master seed (overrides run.seed)");
  app.add_option("--threads", threads, "worker threads; results do not depend on it")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_dir, "parent directory of the run directory");
  app.add_flag("--json", json_out, "also print the result JSON on stdout");
  app.add_option("--preset", preset, "named parameter set of the command");
  app.add_option("--set", overrides, "section.key=value override, repeatable");

  const std::vector<std::pair<std::string, std::string>> descriptions = {
      {"evolve", "linear Crank-Nicolson evolution with snapshots and observables"},
      {"collapse", "stochastic collapse ensemble"},
      {"twolevel", "two-level walks, density matrix and collapse time"},
      {"doubleslit", "interference visibility with and without collapse"},
      {"verify", "invariant suite; exit 1 if any check fails"},
      {"planck", "Planck scales, length uncertainty and collapse time in SI"}};
  for (const auto& [name, help] : descriptions) app.add_subcommand(name, help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {code == 0 ? kExitOk : kExitUsage, std::nullopt};
  }
  const std::string command = app.get_subcommands().front()->get_name();

  CommandOutput result;
  try {
    RunConfig cfg;
    if (!apply_preset(cfg, command, preset)) {
      std::string known;
      for (const auto& p : preset_names(command)) known += (known.empty() ? "" : ", ") + p;
      throw UsageError("unknown preset '" + preset + "' for " + command + " (known: " + known + ")");
    }
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot read config file '" + config_path + "'");
      std::ostringstream text;
      text << in.rdbuf();
      apply_config_text(cfg, text.str());
    }
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects section.key=value, got '" + o + "'");
      cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (seed) cfg.set("run.seed", std::to_string(*seed));
    cfg.seed();  // validates run.seed
    result = run_command(command, cfg, threads);

    CliResult cli{result.exit_code, std::nullopt};
    if (!result.files.empty()) {
      fs::path dir;
      try {
        dir = create_run_dir(out_dir, cfg.seed());
      } catch (const fs::filesystem_error& e) {
        throw UsageError(std::string("--out: ") + e.what());
      }
      for (const auto& f : result.files) {
        std::ofstream file(dir / f.name, std::ios::binary);
        file << f.content;
        if (!file) throw NumericalError("failed writing " + (dir / f.name).string(), 0.0);
      }
      cli.run_dir = dir;
    }
    out << result.text;
    if (cli.run_dir) out << "run directory: " << cli.run_dir->string() << "\n";
    if (json_out) out << result.summary.dump(2) << "\n";
    return cli;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return {kExitUsage, std::nullopt};
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return {kExitUsage, std::nullopt};
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return {kExitCheckFailed, std::nullopt};
  }
}

}  // namespace dstc::app
