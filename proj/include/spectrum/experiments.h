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

// Parameter sweeps and the cell-hopping dynamics.

#ifndef SPECTRUM_EXPERIMENTS_H_
#define SPECTRUM_EXPERIMENTS_H_

#include <functional>
#include <vector>

#include "spectrum/equilibrium.h"
#include "spectrum/mediator.h"
#include "spectrum/scenario.h"

namespace spectrum {

std::vector<int> DefaultUserCounts();     // 500, 600, ..., 2000
std::vector<int> DefaultChannelCounts();  // 5, 6, ..., 20
std::vector<int> DefaultPeriods();        // 10, 20, 30
std::vector<double> DefaultOptInRatios(); // 0.2, 0.5, 0.8

struct UsersRow {
  int n = 0;
  int periods = 0;
  ApproximationBudget budget;
};

// eta for every (n, T). gamma and alpha follow 1/n unless the base fixes
// them.
std::vector<UsersRow> ExperimentUsers(const ScenarioSpec& base,
                                      const std::vector<int>& n_list,
                                      const std::vector<int>& periods_list);

struct ChannelsRow {
  int k = 0;
  int periods = 0;
  ApproximationBudget budget;

  double eta_per_channel() const { return budget.eta / k; }
};

// eta / k for every (k, T) at base.n users.
std::vector<ChannelsRow> ExperimentChannels(
    const ScenarioSpec& base, const std::vector<int>& k_list,
    const std::vector<int>& periods_list);

// One truthfulness experiment per ratio. Throws ParameterError for runs < 1.
std::vector<TruthfulnessResult> ExperimentOptIn(
    const ScenarioSpec& base, const std::vector<double>& ratios, int runs,
    bool noise_enabled = true);

// log(channels / max(1, users)) per cell.
std::vector<double> DefaultCellEstimates(const HexWorld& world);

struct DynamicsStepResult {
  HexWorld world;
  // Users that changed cell, and arrivals per cell.
  int moved = 0;
  std::vector<int> arrivals;
};

// Every user simultaneously moves to the adjacent cell with the highest
// estimate if that estimate strictly beats its own cell's; ties among
// neighbours go to the lowest cell index.
DynamicsStepResult DynamicsStep(const HexWorld& world,
                                const std::vector<double>& estimates);

struct DynamicsRow {
  int step = 0;
  int cell = 0;
  int channels = 0;
  int users = 0;
  // Users that arrived in this cell during the step.
  int moved = 0;
};

// Step 0 records the initial occupancy; estimates are recomputed with
// DefaultCellEstimates before each step.
std::vector<DynamicsRow> ExperimentDynamics(const HexWorld& world, int steps);

}  // namespace spectrum

#endif  // SPECTRUM_EXPERIMENTS_H_
