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


#include "dstc_app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "dstc/error.hpp"

namespace dstc::app {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string field_error(std::string_view key, std::string_view what, std::string_view value) {
  return "config field '" + std::string(key) + "': " + std::string(what) + ", got '" + std::string(value) + "'";
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

const std::vector<KeySpec>& RunConfig::keys() {
  static const std::vector<KeySpec> specs = {
      {"run.seed", "0", "master seed; trajectory i draws from stream i"},
      {"units.mode", "scaled", "scaled (hbar = m = 1) or si"},
      {"units.planck_energy", "100", "Planck energy in scaled mode"},
      {"units.mass", "9.1093837015e-31", "particle mass in kg, si mode"},
      {"grid.n_cells", "512", "lattice cells"},
      {"grid.dx", "0.1", "lattice spacing"},
      {"grid.x_min", "auto", "left edge; auto centres the grid on 0"},
      {"grid.boundary", "periodic", "periodic or dirichlet"},
      {"potential.preset", "free", "free | box | harmonic(w) | double_well(a,b) | linear(F) | custom(path)"},
      {"state.kind", "gaussian", "gaussian | eigenstate | coherent"},
      {"state.x0", "0", "packet centre, or displacement of a coherent state"},
      {"state.sigma", "1", "rms width of |psi|^2"},
      {"state.p0", "1", "mean momentum"},
      {"state.shift", "0", "energy shift for the eigenstate search"},
      {"evolve.dt", "0.01", "time step"},
      {"evolve.steps", "1000", "number of steps"},
      {"evolve.snapshot_stride", "100", "steps between snapshots"},
      {"collapse.system", "two-site", "two-site | two-region | grid"},
      {"collapse.alpha", "0.3", "initial weight of the first region (two-site, two-region)"},
      {"collapse.dE", "1", "level splitting (two-site, two-region)"},
      {"collapse.k", "1", "dimensionless collapse constant"},
      {"collapse.cell_width", "1", "lattice cells per Planck cell (grid system)"},
      {"collapse.eps", "1e-3", "absorption threshold"},
      {"collapse.rate", "none", "fixed r = dE / (k E_p), or none"},
      {"collapse.n_traj", "10000", "trajectories"},
      {"collapse.t_max", "auto", "time budget per trajectory; auto is 100 collapse times"},
      {"collapse.log_trajectories", "4", "trajectories written to CSV"},
      {"collapse.log_stride", "100", "steps between logged rows"},
      {"twolevel.alpha0", "0.5", "initial upper-level weight"},
      {"twolevel.dE", "1", "energy difference; si mode accepts eV and GeV suffixes"},
      {"twolevel.n_walks", "10000", "Monte Carlo walks; 0 skips them"},
      {"twolevel.max_steps", "0", "step budget per walk; 0 picks 200 / lambda^2"},
      {"twolevel.t", "auto", "density-matrix time; auto is 0.1 collapse times"},
      {"doubleslit.separation", "10", "slit separation"},
      {"doubleslit.slit_width", "0.5", "rms slit width"},
      {"doubleslit.screen_time", "20", "flight time to the screen"},
      {"doubleslit.n_cells", "1024", "lattice cells"},
      {"doubleslit.dx", "0.2", "lattice spacing"},
      {"doubleslit.rates", "0.05,0.2,1.0", "collapse-on sweep of r"},
      {"doubleslit.n_traj", "32", "trajectories per sweep point"},
      {"verify.dt", "0.01", "coarse step of the continuity study"},
      {"verify.continuity_tol", "5e-3", "bound on the coarse continuity residual"},
      {"verify.unitarity_steps", "10000", "steps in the norm-drift check"},
      {"verify.martingale_points", "20", "random (rho, lambda) points"},
      {"verify.martingale_samples", "100000", "single steps per point"},
      {"verify.harmonic_dx", "0.01", "grid spacing of the oscillator check"},
      {"verify.harmonic_dt", "0.005", "time step of the oscillator check"},
      {"planck.length", "1", "measured length in m"},
      {"planck.clock_mass", "auto", "clock mass in kg; auto picks the optimum"},
      {"planck.dE", "7 GeV", "energy difference for the collapse time"},
  };
  return specs;
}

RunConfig::RunConfig() {
  for (const auto& k : keys()) values_.emplace(k.key, k.default_value);
}

void RunConfig::set(std::string_view key, std::string value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("unknown config key '" + std::string(key) + "'");
  it->second = std::string(trim(value));
}

const std::string& RunConfig::raw(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("unknown config key '" + std::string(key) + "'");
  return it->second;
}

double RunConfig::real(std::string_view key) const {
  const auto& v = raw(key);
  const auto d = parse_double(v);
  if (!d) throw UsageError(field_error(key, "expected a finite number", v));
  return *d;
}

double RunConfig::positive(std::string_view key) const {
  const double v = real(key);
  if (!(v > 0.0)) throw UsageError(field_error(key, "must be positive", raw(key)));
  return v;
}

double RunConfig::non_negative(std::string_view key) const {
  const double v = real(key);
  if (v < 0.0) throw UsageError(field_error(key, "must be non-negative", raw(key)));
  return v;
}

double RunConfig::probability(std::string_view key) const {
  const double v = real(key);
  if (!(v > 0.0 && v < 1.0)) throw UsageError(field_error(key, "must lie in (0, 1)", raw(key)));
  return v;
}

std::uint64_t RunConfig::count(std::string_view key) const {
  const auto& v = raw(key);
  const auto t = trim(v);
  std::uint64_t n = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw UsageError(field_error(key, "expected a non-negative integer", v));
  }
  return n;
}

std::optional<double> RunConfig::real_or(std::string_view key, std::string_view sentinel) const {
  if (raw(key) == sentinel) return std::nullopt;
  return real(key);
}

std::vector<double> RunConfig::real_list(std::string_view key) const {
  const auto& v = raw(key);
  std::vector<double> out;
  std::string_view rest = v;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto d = parse_double(item);
    if (!d) throw UsageError(field_error(key, "expected comma-separated numbers", v));
    out.push_back(*d);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (out.empty()) throw UsageError(field_error(key, "expected at least one number", v));
  return out;
}

double RunConfig::energy(std::string_view key) const {
  std::string_view v = trim(raw(key));
  double scale = 1.0;
  for (const auto& [suffix, factor] : {std::pair{std::string_view("GeV"), codata::kGeV},
                                       std::pair{std::string_view("eV"), codata::kElectronVolt}}) {
    if (v.size() > suffix.size() && v.substr(v.size() - suffix.size()) == suffix) {
      if (!is("units.mode", "si")) throw UsageError(field_error(key, "unit suffixes need units.mode = si", v));
      v = trim(v.substr(0, v.size() - suffix.size()));
      scale = factor;
      break;
    }
  }
  const auto d = parse_double(v);
  if (!d) throw UsageError(field_error(key, "expected an energy", raw(key)));
  if (*d < 0.0) throw UsageError(field_error(key, "must be non-negative", raw(key)));
  return *d * scale;
}

UnitSystem RunConfig::units() const {
  const auto& mode = raw("units.mode");
  if (mode == "si") return UnitSystem::si(positive("units.mass"));
  if (mode == "scaled") return UnitSystem::scaled(positive("units.planck_energy"));
  throw UsageError(field_error("units.mode", "expected 'si' or 'scaled'", mode));
}

LatticeGrid RunConfig::grid() const {
  const auto n = count("grid.n_cells");
  if (n < 2) throw UsageError(field_error("grid.n_cells", "need at least 2 cells", raw("grid.n_cells")));
  const double dx = positive("grid.dx");
  const auto x_min = real_or("grid.x_min", "auto").value_or(-0.5 * static_cast<double>(n) * dx);
  Boundary b{};
  try {
    b = parse_boundary(raw("grid.boundary"));
  } catch (const std::exception&) {
    throw UsageError(field_error("grid.boundary", "expected 'periodic' or 'dirichlet'", raw("grid.boundary")));
  }
  return LatticeGrid(n, dx, x_min, b);
}

json RunConfig::echo() const {
  json j = json::object();
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    j[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  return j;
}

std::string RunConfig::csv_header() const { return "# config " + echo().dump() + "\n"; }

void apply_config_text(RunConfig& cfg, std::string_view text) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw UsageError(std::string("config: invalid JSON echo: ") + e.what());
    }
    if (j.contains("config")) j = j["config"];
    if (!j.is_object()) throw UsageError("config: JSON echo must be an object of sections");
    for (const auto& [section, fields] : j.items()) {
      if (!fields.is_object()) throw UsageError("config: section '" + section + "' must be an object");
      for (const auto& [name, value] : fields.items()) {
        if (!value.is_string()) throw UsageError("config field '" + section + "." + name + "': must be a string");
        cfg.set(section + "." + name, value.get<std::string>());
      }
    }
    return;
  }

  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::string_view l = line;
    if (const auto c = l.find_first_of("#;"); c != std::string_view::npos) l = l.substr(0, c);
    l = trim(l);
    if (l.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (l.front() == '[') {
      if (l.back() != ']' || l.size() < 3) throw UsageError(where + "malformed section header");
      section = std::string(trim(l.substr(1, l.size() - 2)));
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw UsageError(where + "expected 'key = value'");
    const auto name = trim(l.substr(0, eq));
    if (name.empty()) throw UsageError(where + "empty key");
    if (section.empty()) throw UsageError(where + "key '" + std::string(name) + "' outside any [section]");
    try {
      cfg.set(section + "." + std::string(name), std::string(trim(l.substr(eq + 1))));
    } catch (const UsageError& e) {
      throw UsageError(where + e.what());
    }
  }
}

namespace {

using Preset = std::vector<std::pair<std::string, std::string>>;

const std::map<std::string, std::map<std::string, Preset>, std::less<>>& presets() {
  static const std::map<std::string, std::map<std::string, Preset>, std::less<>> table = {
      {"evolve",
       {{"default", {{"grid.n_cells", "2048"}, {"grid.dx", "0.05"}}},
        {"free-gaussian", {{"grid.n_cells", "2048"}, {"grid.dx", "0.05"}}},
        {"harmonic-coherent",
         {{"potential.preset", "harmonic(1)"},
          {"state.kind", "coherent"},
          {"state.x0", "2"},
          {"grid.n_cells", "2000"},
          {"grid.dx", "0.01"},
          {"evolve.dt", "0.005"},
          {"evolve.steps", "1257"},
          {"evolve.snapshot_stride", "50"}}}}},
      // r = dE / E_p = 1/30 keeps 10^4 trajectories at a few seconds.
      {"collapse",
       {{"default", {{"units.planck_energy", "30"}}},
        {"two-site-born", {{"units.planck_energy", "30"}}},
        {"two-region",
         {{"units.planck_energy", "30"}, {"collapse.system", "two-region"}, {"collapse.n_traj", "2000"}}}}},
      {"twolevel",
       {{"default", {}},
        {"si-7gev", {{"units.mode", "si"}, {"twolevel.dE", "7 GeV"}, {"twolevel.n_walks", "0"}}}}},
      {"doubleslit", {{"default", {{"units.planck_energy", "20"}}}}},
      // At dt = 2 a single step moves the packet by twice its width, far
      // outside the regime where the discrete continuity residual converges.
      {"verify", {{"default", {}}, {"unstable", {{"verify.dt", "2"}}}}},
      {"planck", {{"default", {{"units.mode", "si"}}}}},
  };
  return table;
}

}  // namespace

bool apply_preset(RunConfig& cfg, std::string_view command, std::string_view preset) {
  const auto cmd = presets().find(command);
  if (cmd == presets().end()) return false;
  const auto p = cmd->second.find(std::string(preset));
  if (p == cmd->second.end()) return false;
  for (const auto& [k, v] : p->second) cfg.set(k, v);
  return true;
}

std::vector<std::string> preset_names(std::string_view command) {
  std::vector<std::string> out;
  const auto cmd = presets().find(command);
  if (cmd == presets().end()) return out;
  for (const auto& [name, unused] : cmd->second) out.push_back(name);
  return out;
}

}  // namespace dstc::app
