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

// Random network scenarios. Users are dropped into hexagonal cells and get
// Rayleigh-faded gains plus pool-drawn contention and strategy values.

#ifndef SPECTRUM_SCENARIO_H_
#define SPECTRUM_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectrum/model.h"

namespace spectrum {

// -100 dBm.
inline constexpr double kDefaultNoiseW = 1e-13;

double DbmToWatts(double dbm);

struct ScenarioSpec {
  std::uint64_t seed = 1;
  int n = 1000;
  int k = 15;
  int m = 50;
  double hex_side_m = 500.0;
  double epsilon = 0.1;
  double delta = 0.25;
  double beta = 0.25;
  // 1/n when unset.
  std::optional<double> gamma;
  std::optional<double> alpha;
  double bandwidth_hz = 20e6;
  double tx_power_w = 0.1;
  double noise_dbm = -100.0;
  std::vector<double> contention_pool = {0.1, 0.2, 0.3, 0.4, 0.5,
                                         0.6, 0.7, 0.8, 0.9};
  // 0.01, 0.02, ..., 0.99 when empty.
  std::vector<double> strategy_pool;
  std::optional<int> periods;
  // SparCost threshold; alpha when unset.
  std::optional<double> sparcost_threshold;
  double optin_ratio = 0.5;
  int runs = 100;
  // Hexagon rings around the centre cell; 1 gives 7 cells.
  int rings = 1;
  // Per-cell channel counts are drawn uniformly from [min_cell_channels, k].
  int min_cell_channels = 1;

  double Gamma() const { return gamma.value_or(1.0 / n); }
  double Alpha() const { return alpha.value_or(1.0 / n); }
  std::vector<double> StrategyPool() const;

  void Validate() const;
};

// Flat JSON object whose keys are the ScenarioSpec field names. Unknown keys
// and type mismatches throw ParameterError.
ScenarioSpec ParseScenarioJson(const std::string& text,
                               ScenarioSpec base = {});
ScenarioSpec LoadScenarioFile(const std::string& path, ScenarioSpec base = {});
std::string ScenarioToJson(const ScenarioSpec& spec);

struct HexCell {
  // Axial coordinates.
  int q = 0;
  int r = 0;
  double x = 0.0;
  double y = 0.0;
  int channels = 0;
};

struct HexWorld {
  double side = 0.0;
  std::vector<HexCell> cells;
  std::vector<int> user_cell;
  std::vector<double> user_x;
  std::vector<double> user_y;

  std::vector<int> Neighbors(int cell) const;
  // Users per cell, i.e. the size of each cell's conflict set.
  std::vector<int> Load() const;
  std::vector<int> ConflictSet(int cell) const;
};

// Pointy-top hexagon of the given side centred at the origin.
bool InsideHexagon(double x, double y, double side);

std::vector<HexCell> HexLayout(int rings, double side);

struct Scenario {
  GameSpec game;
  HexWorld world;
  // Rows each user would report if opting in.
  MixedStrategyProfile submitted;
};

Scenario GenScenario(const ScenarioSpec& spec);

}  // namespace spectrum

#endif  // SPECTRUM_SCENARIO_H_
