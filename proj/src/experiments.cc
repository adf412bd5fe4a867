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

#include "spectrum/experiments.h"

#include <algorithm>
#include <cmath>

#include "spectrum/errors.h"

namespace spectrum {
namespace {

std::vector<int> Range(int first, int last, int step) {
  std::vector<int> out;
  for (int v = first; v <= last; v += step) out.push_back(v);
  return out;
}

ApproximationBudget BudgetFor(const ScenarioSpec& spec, int n, int k,
                              int periods) {
  const double gamma = spec.gamma.value_or(1.0 / n);
  const double alpha = spec.alpha.value_or(1.0 / n);
  return EtaBudget(n, spec.m, k, gamma, alpha, spec.beta, spec.epsilon,
                   spec.delta, periods);
}

}  // namespace

std::vector<int> DefaultUserCounts() { return Range(500, 2000, 100); }
std::vector<int> DefaultChannelCounts() { return Range(5, 20, 1); }
std::vector<int> DefaultPeriods() { return {10, 20, 30}; }
std::vector<double> DefaultOptInRatios() { return {0.2, 0.5, 0.8}; }

std::vector<UsersRow> ExperimentUsers(const ScenarioSpec& base,
                                      const std::vector<int>& n_list,
                                      const std::vector<int>& periods_list) {
  std::vector<UsersRow> rows;
  for (int periods : periods_list) {
    for (int n : n_list) {
      rows.push_back({n, periods, BudgetFor(base, n, base.k, periods)});
    }
  }
  return rows;
}

std::vector<ChannelsRow> ExperimentChannels(
    const ScenarioSpec& base, const std::vector<int>& k_list,
    const std::vector<int>& periods_list) {
  std::vector<ChannelsRow> rows;
  for (int periods : periods_list) {
    for (int k : k_list) {
      rows.push_back({k, periods, BudgetFor(base, base.n, k, periods)});
    }
  }
  return rows;
}

std::vector<TruthfulnessResult> ExperimentOptIn(
    const ScenarioSpec& base, const std::vector<double>& ratios, int runs,
    bool noise_enabled) {
  if (runs < 1) throw ParameterError("opt-in experiment needs runs >= 1");
  if (ratios.empty()) throw ParameterError("no opt-in ratios given");
  std::vector<TruthfulnessResult> out;
  for (double ratio : ratios) {
    out.push_back(TruthfulnessExperiment(base, ratio, runs, noise_enabled));
  }
  return out;
}

std::vector<double> DefaultCellEstimates(const HexWorld& world) {
  const std::vector<int> load = world.Load();
  std::vector<double> out(world.cells.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = std::log(static_cast<double>(world.cells[c].channels) /
                      std::max(1, load[c]));
  }
  return out;
}

DynamicsStepResult DynamicsStep(const HexWorld& world,
                                const std::vector<double>& estimates) {
  if (estimates.size() != world.cells.size()) {
    throw ParameterError("need one estimate per cell");
  }
  std::vector<int> target(world.cells.size());
  for (std::size_t c = 0; c < world.cells.size(); ++c) {
    int best = static_cast<int>(c);
    for (int nb : world.Neighbors(static_cast<int>(c))) {
      if (estimates[nb] > estimates[best]) best = nb;
    }
    target[c] = best;
  }
  DynamicsStepResult out;
  out.world = world;
  out.arrivals.assign(world.cells.size(), 0);
  for (std::size_t i = 0; i < world.user_cell.size(); ++i) {
    const int from = world.user_cell[i];
    const int to = target[from];
    if (to == from) continue;
    out.world.user_cell[i] = to;
    out.world.user_x[i] += world.cells[to].x - world.cells[from].x;
    out.world.user_y[i] += world.cells[to].y - world.cells[from].y;
    ++out.moved;
    ++out.arrivals[to];
  }
  return out;
}

std::vector<DynamicsRow> ExperimentDynamics(const HexWorld& world, int steps) {
  if (steps < 0) throw ParameterError("steps must be nonnegative");
  std::vector<DynamicsRow> rows;
  HexWorld current = world;
  std::vector<int> arrivals(world.cells.size(), 0);
  for (int step = 0; step <= steps; ++step) {
    if (step > 0) {
      DynamicsStepResult next =
          DynamicsStep(current, DefaultCellEstimates(current));
      current = std::move(next.world);
      arrivals = std::move(next.arrivals);
    }
    const std::vector<int> load = current.Load();
    for (std::size_t c = 0; c < current.cells.size(); ++c) {
      rows.push_back({step, static_cast<int>(c), current.cells[c].channels,
                      load[c], arrivals[c]});
    }
  }
  return rows;
}

}  // namespace spectrum
