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

#include "dstc/io.hpp"

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "dstc/error.hpp"
#include "json.hpp"

namespace dstc {

using nlohmann::json;

namespace {

json grid_json(const LatticeGrid& g) {
  return {{"n_cells", g.size()}, {"dx", g.dx()}, {"x_min", g.x_min()}, {"boundary", to_string(g.boundary())}};
}

LatticeGrid grid_from_json(const json& j) {
  return LatticeGrid(j.at("n_cells").get<std::size_t>(), j.at("dx").get<double>(), j.at("x_min").get<double>(),
                     parse_boundary(j.at("boundary").get<std::string>()));
}

json units_object(const UnitSystem& u) {
  json j = {{"mode", to_string(u.mode())},
            {"hbar", u.hbar()},
            {"mass", u.mass()},
            {"planck_energy", u.planck_energy()},
            {"planck_time", u.planck_time()},
            {"planck_length", u.planck_length()}};
  if (auto c = u.speed_of_light()) j["speed_of_light"] = *c;
  if (auto g = u.grav_constant()) j["grav_constant"] = *g;
  return j;
}

UnitSystem units_from_object(const json& j) {
  const auto mode = parse_unit_mode(j.at("mode").get<std::string>());
  if (mode == UnitMode::kSI) return UnitSystem::si(j.at("mass").get<double>());
  return UnitSystem::scaled(j.at("planck_energy").get<double>());
}

double parse_field(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("wavefunction csv: bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string units_json(const UnitSystem& units) { return units_object(units).dump(); }

UnitSystem units_from_json(const std::string& text) { return units_from_object(json::parse(text)); }

void write_wavefunction_csv(std::ostream& out, const WaveFunction& psi, const UnitSystem& units) {
  const json meta = {{"grid", grid_json(psi.grid)}, {"time", psi.time}, {"units", units_object(units)}};
  out << "# " << meta.dump() << '\n' << "x,re_psi,im_psi\n";
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    out << format_double(psi.grid.x(i)) << ',' << format_double(psi.amp[i].real()) << ','
        << format_double(psi.amp[i].imag()) << '\n';
  }
}

LoadedWaveFunction read_wavefunction_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw UsageError("wavefunction csv: missing '# {json}' metadata line");
  }
  json meta;
  std::optional<LatticeGrid> grid;
  std::optional<UnitSystem> units;
  double time = 0.0;
  try {
    meta = json::parse(line.substr(2));
    grid = grid_from_json(meta.at("grid"));
    units = units_from_object(meta.at("units"));
    time = meta.at("time").get<double>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("wavefunction csv: bad metadata: ") + e.what());
  }
  if (!std::getline(in, line) || line != "x,re_psi,im_psi") {
    throw UsageError("wavefunction csv: expected header 'x,re_psi,im_psi'");
  }
  std::vector<Complex> amp;
  amp.reserve(grid->size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw UsageError("wavefunction csv: short row");
    std::string_view sv(line);
    amp.emplace_back(parse_field(sv.substr(c1 + 1, c2 - c1 - 1)), parse_field(sv.substr(c2 + 1)));
  }
  return {WaveFunction(*grid, std::move(amp), time), *units};
}

void write_momentum_csv(std::ostream& out, const MomentumState& phi, const UnitSystem& units) {
  const json meta = {{"grid", grid_json(phi.grid)},
                     {"time", phi.time},
                     {"dp", phi.dp()},
                     {"units", units_object(units)}};
  out << "# " << meta.dump() << '\n' << "p,re,im,f\n";
  for (std::size_t j = 0; j < phi.amp.size(); ++j) {
    out << format_double(phi.p(j)) << ',' << format_double(phi.amp[j].real()) << ','
        << format_double(phi.amp[j].imag()) << ',' << format_double(std::norm(phi.amp[j])) << '\n';
  }
}

}  // namespace dstc
