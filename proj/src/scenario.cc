//
// Copyright 2026 The Spectrum Sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "spectrum/scenario.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spectrum/errors.h"
#include "spectrum/rng.h"

namespace spectrum {
namespace {

using Json = nlohmann::ordered_json;

const double kSqrt3 = std::sqrt(3.0);

std::size_t UniformIndex(KeyedStream& stream, std::size_t size) {
  const auto index =
      static_cast<std::size_t>(stream.NextOpenUniform() * static_cast<double>(size));
  return std::min(index, size - 1);
}

void RequirePool(const std::vector<double>& pool, const char* name) {
  if (pool.empty()) throw ParameterError(std::string(name) + " is empty");
  for (double v : pool) {
    if (!(v > 0.0 && v < 1.0)) {
      throw ParameterError(std::string(name) + " values must lie in (0, 1)");
    }
  }
}

template <typename T>
T Get(const Json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParameterError("config key '" + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> GetOptional(const Json& value, const std::string& key) {
  if (value.is_null()) return std::nullopt;
  return Get<T>(value, key);
}

template <typename T>
Json OptionalJson(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

double DbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

std::vector<double> ScenarioSpec::StrategyPool() const {
  if (!strategy_pool.empty()) return strategy_pool;
  std::vector<double> pool(99);
  for (int v = 1; v <= 99; ++v) pool[v - 1] = v / 100.0;
  return pool;
}

void ScenarioSpec::Validate() const {
  if (n < 1 || k < 1 || m < 1) {
    throw ParameterError("n, k and m must be at least 1");
  }
  if (!(hex_side_m > 0.0)) throw ParameterError("hex_side_m must be positive");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta outside (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta outside (0, 1)");
  if (!(Gamma() > 0.0) || !(Alpha() > 0.0)) {
    throw ParameterError("gamma and alpha must be positive");
  }
  if (Alpha() > n * Gamma() * (1.0 + 1e-12)) {
    throw ParameterError("alpha must not exceed n * gamma");
  }
  if (!(bandwidth_hz > 0.0) || !(tx_power_w > 0.0)) {
    throw ParameterError("bandwidth and transmit power must be positive");
  }
  if (!std::isfinite(noise_dbm)) throw ParameterError("noise_dbm not finite");
  RequirePool(contention_pool, "contention_pool");
  RequirePool(StrategyPool(), "strategy_pool");
  if (periods && *periods < 1) throw ParameterError("periods must be >= 1");
  if (sparcost_threshold && !std::isfinite(*sparcost_threshold)) {
    throw ParameterError("sparcost_threshold not finite");
  }
  if (!(optin_ratio >= 0.0 && optin_ratio <= 1.0)) {
    throw ParameterError("optin_ratio outside [0, 1]");
  }
  if (runs < 1) throw ParameterError("runs must be at least 1");
  if (rings < 0) throw ParameterError("rings must be nonnegative");
  if (min_cell_channels < 1 || min_cell_channels > k) {
    throw ParameterError("min_cell_channels must lie in [1, k]");
  }
}

ScenarioSpec ParseScenarioJson(const std::string& text, ScenarioSpec base) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParameterError("config must be a JSON object");
  ScenarioSpec s = std::move(base);
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      s.seed = Get<std::uint64_t>(value, key);
    } else if (key == "n") {
      s.n = Get<int>(value, key);
    } else if (key == "k") {
      s.k = Get<int>(value, key);
    } else if (key == "m") {
      s.m = Get<int>(value, key);
    } else if (key == "hex_side_m") {
      s.hex_side_m = Get<double>(value, key);
    } else if (key == "epsilon") {
      s.epsilon = Get<double>(value, key);
    } else if (key == "delta") {
      s.delta = Get<double>(value, key);
    } else if (key == "beta") {
      s.beta = Get<double>(value, key);
    } else if (key == "gamma") {
      s.gamma = GetOptional<double>(value, key);
    } else if (key == "alpha") {
      s.alpha = GetOptional<double>(value, key);
    } else if (key == "bandwidth_hz") {
      s.bandwidth_hz = Get<double>(value, key);
    } else if (key == "tx_power_w") {
      s.tx_power_w = Get<double>(value, key);
    } else if (key == "noise_dbm") {
      s.noise_dbm = Get<double>(value, key);
    } else if (key == "contention_pool") {
      s.contention_pool = Get<std::vector<double>>(value, key);
    } else if (key == "strategy_pool") {
      s.strategy_pool = Get<std::vector<double>>(value, key);
    } else if (key == "periods") {
      s.periods = GetOptional<int>(value, key);
    } else if (key == "sparcost_threshold") {
      s.sparcost_threshold = GetOptional<double>(value, key);
    } else if (key == "optin_ratio") {
      s.optin_ratio = Get<double>(value, key);
    } else if (key == "runs") {
      s.runs = Get<int>(value, key);
    } else if (key == "rings") {
      s.rings = Get<int>(value, key);
    } else if (key == "min_cell_channels") {
      s.min_cell_channels = Get<int>(value, key);
    } else {
      throw ParameterError("unknown config key '" + key + "'");
    }
  }
  s.Validate();
  return s;
}

ScenarioSpec LoadScenarioFile(const std::string& path, ScenarioSpec base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenarioJson(buffer.str(), std::move(base));
}

std::string ScenarioToJson(const ScenarioSpec& s) {
  Json doc;
  doc["seed"] = s.seed;
  doc["n"] = s.n;
  doc["k"] = s.k;
  doc["m"] = s.m;
  doc["hex_side_m"] = s.hex_side_m;
  doc["epsilon"] = s.epsilon;
  doc["delta"] = s.delta;
  doc["beta"] = s.beta;
  doc["gamma"] = OptionalJson(s.gamma);
  doc["alpha"] = OptionalJson(s.alpha);
  doc["bandwidth_hz"] = s.bandwidth_hz;
  doc["tx_power_w"] = s.tx_power_w;
  doc["noise_dbm"] = s.noise_dbm;
  doc["contention_pool"] = s.contention_pool;
  doc["strategy_pool"] = s.strategy_pool;
  doc["periods"] = OptionalJson(s.periods);
  doc["sparcost_threshold"] = OptionalJson(s.sparcost_threshold);
  doc["optin_ratio"] = s.optin_ratio;
  doc["runs"] = s.runs;
  doc["rings"] = s.rings;
  doc["min_cell_channels"] = s.min_cell_channels;
  return doc.dump(2);
}

bool InsideHexagon(double x, double y, double side) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  return ax <= side * kSqrt3 / 2.0 && ay + ax / kSqrt3 <= side;
}

std::vector<HexCell> HexLayout(int rings, double side) {
  std::vector<HexCell> cells;
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      if (std::abs(q + r) > rings) continue;
      HexCell cell;
      cell.q = q;
      cell.r = r;
      cell.x = side * kSqrt3 * (q + r / 2.0);
      cell.y = side * 1.5 * r;
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<int> HexWorld::Neighbors(int cell) const {
  static constexpr int kDirections[6][2] = {{1, 0},  {1, -1}, {0, -1},
                                            {-1, 0}, {-1, 1}, {0, 1}};
  std::vector<int> out;
  const HexCell& c = cells.at(cell);
  for (const auto& dir : kDirections) {
    for (std::size_t o = 0; o < cells.size(); ++o) {
      if (cells[o].q == c.q + dir[0] && cells[o].r == c.r + dir[1]) {
        out.push_back(static_cast<int>(o));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> HexWorld::Load() const {
  std::vector<int> load(cells.size(), 0);
  for (int c : user_cell) ++load[c];
  return load;
}

std::vector<int> HexWorld::ConflictSet(int cell) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < user_cell.size(); ++i) {
    if (user_cell[i] == cell) out.push_back(static_cast<int>(i));
  }
  return out;
}

Scenario GenScenario(const ScenarioSpec& spec) {
  spec.Validate();
  const int n = spec.n;
  const int k = spec.k;
  const int m = spec.m;
  const std::uint64_t seed = spec.seed;

  Scenario out;
  GameSpec& game = out.game;
  game.n = n;
  game.m = m;
  game.k = k;
  game.gamma = spec.Gamma();
  game.alpha = spec.Alpha();
  game.radio = RadioParams::Constant(n, m, k, spec.bandwidth_hz,
                                     spec.tx_power_w, 1.0,
                                     DbmToWatts(spec.noise_dbm));
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < k; ++d) {
      KeyedStream stream({seed, StreamTag::kScenarioGain,
                          static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(d), 0});
      game.radio.channel_gain[i * k + d] = -std::log(stream.NextOpenUniform());
    }
  }

  game.actions.assign(n, std::vector<ActionSpec>(m));
  game.played_action.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      KeyedStream stream({seed, StreamTag::kScenarioAction,
                          static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j), 0});
      game.actions[i][j] = {
          j, spec.contention_pool[UniformIndex(stream,
                                               spec.contention_pool.size())]};
    }
    KeyedStream pick({seed, StreamTag::kScenarioAction,
                      static_cast<std::uint32_t>(i), 0, 1});
    game.played_action[i] = static_cast<int>(UniformIndex(pick, m));
  }
  game.Validate();

  const std::vector<double> pool = spec.StrategyPool();
  out.submitted = MixedStrategyProfile::Uniform(n, k);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int d = 0; d < k; ++d) {
      KeyedStream stream({seed, StreamTag::kScenarioStrategy,
                          static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(d), 0});
      const double v = pool[UniformIndex(stream, pool.size())];
      out.submitted.probabilities(i, d) = v;
      total += v;
    }
    for (double& v : out.submitted.probabilities.row(i)) v /= total;
  }

  HexWorld& world = out.world;
  world.side = spec.hex_side_m;
  world.cells = HexLayout(spec.rings, spec.hex_side_m);
  for (std::size_t c = 0; c < world.cells.size(); ++c) {
    KeyedStream stream(
        {seed, StreamTag::kScenario, static_cast<std::uint32_t>(c), 0, 0});
    const int span = k - spec.min_cell_channels + 1;
    world.cells[c].channels =
        spec.min_cell_channels + static_cast<int>(UniformIndex(stream, span));
  }
  world.user_cell.resize(n);
  world.user_x.resize(n);
  world.user_y.resize(n);
  const double half_width = spec.hex_side_m * kSqrt3 / 2.0;
  for (int i = 0; i < n; ++i) {
    KeyedStream stream({seed, StreamTag::kScenarioPosition,
                        static_cast<std::uint32_t>(i), 0, 0});
    const int cell = static_cast<int>(UniformIndex(stream, world.cells.size()));
    double x = 0.0;
    double y = 0.0;
    do {
      x = (2.0 * stream.NextOpenUniform() - 1.0) * half_width;
      y = (2.0 * stream.NextOpenUniform() - 1.0) * spec.hex_side_m;
    } while (!InsideHexagon(x, y, spec.hex_side_m));
    world.user_cell[i] = cell;
    world.user_x[i] = world.cells[cell].x + x;
    world.user_y[i] = world.cells[cell].y + y;
  }
  return out;
}

}  // namespace spectrum
