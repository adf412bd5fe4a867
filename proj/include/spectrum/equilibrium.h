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

// Aggregator grid search, aggregative best responses, the approximation
// budget eta = zeta + alpha + E1 + E2, and brute-force regret oracles.

#ifndef SPECTRUM_EQUILIBRIUM_H_
#define SPECTRUM_EQUILIBRIUM_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "spectrum/dp_mechanisms.h"
#include "spectrum/model.h"

namespace spectrum {

// {0, alpha, 2 alpha, ...} covering [0, n * gamma]; floor(n gamma / alpha) + 1
// evenly spaced points. When n gamma / alpha is integral the last point is
// n gamma.
struct AggregatorGrid {
  double alpha = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

AggregatorGrid BuildGrid(int n, double gamma, double alpha);

// gamma * sqrt(8 n ln(2 m n)).
double ZetaBound(int n, int m, double gamma);

// Smallest a with |aggregator - q_hat| <= a, i.e. the absolute gap.
double CandidateCost(double q_hat, double aggregator);

// Cost of grid value `q_hat` for user i on channel d under `strategies`
// (opt-out rows already replaced by 1/k).
double CandidateCost(double q_hat, std::size_t i, int d,
                     const ContributionTable& q, const Matrix& strategies,
                     double gamma);

// Per (user, channel) target aggregators chosen by SparCost.
struct SetValuedTarget {
  int n = 0;
  int k = 0;
  double threshold = 0.0;
  std::vector<double> q_hat;
  // Noisy cost released by SparCost, or the noise-free cost on fallback.
  std::vector<double> cost;
  std::vector<std::size_t> grid_index;
  std::vector<bool> fallback;
  int fallback_count = 0;

  double target(std::size_t i, int d) const { return q_hat[i * k + d]; }
  double cost_at(std::size_t i, int d) const { return cost[i * k + d]; }
};

// Streams each (user, channel)'s grid costs in ascending grid order through
// SparCost with sensitivity gamma. Exhausted cells fall back to the
// noise-free argmin and are counted (with a warning).
SetValuedTarget SelectTargets(const AggregatorGrid& grid,
                              const ContentionProfile& p,
                              const Matrix& strategies, double gamma,
                              double threshold, double epsilon,
                              const NoiseControl& noise);

// Actions of user i whose utility on channel d, at the fixed aggregator
// q_hat, is within xi of the best action's. Channels with zero rate for an
// action (out of range) exclude that action. Ties are included.
std::vector<int> BestResponseSet(const GameSpec& game, std::size_t i, int d,
                                 double q_hat, double xi);

struct E2Solution {
  double e2 = 0.0;
  // Horizon induced by the solution, before rounding.
  double periods = 1.0;
  int iterations = 0;
};

// Solves E2^2 = 32 sqrt(2) n gamma^2 ln(2 k T / beta)
//               * sqrt(ln k ln(1/delta)) / epsilon,
// with T = 16 n^2 gamma^2 ln k / E2^2, by Newton steps on log(E2^2) starting
// at E2 = 1. k == 1 gives E2 = 0 and T = 1. Throws NumericalError after 10^4
// iterations.
E2Solution SolveE2(int n, int k, double gamma, double beta, double epsilon,
                   double delta);

// Rounded-up horizon, at least 1.
int PrescribedPeriods(const E2Solution& solution);

// Learning error for a fixed horizon: 4 n gamma sqrt(ln k / T), i.e. the
// horizon formula solved for E2.
double E2ForPeriods(int n, int k, double gamma, int periods);

struct ApproximationBudget {
  double zeta = 0.0;
  double alpha = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double eta = 0.0;
  double xi = 0.0;
  int periods = 1;
  bool periods_overridden = false;
};

// Assembles zeta, alpha, E1 (grid size n gamma / alpha), E2 and
// eta = zeta + alpha + E1 + E2, xi = gamma + 2 alpha + zeta. Without an
// override E2 and the horizon come from SolveE2; with one, E2 comes from
// E2ForPeriods.
ApproximationBudget EtaBudget(int n, int m, int k, double gamma, double alpha,
                              double beta, double epsilon, double delta,
                              std::optional<int> periods_override = {});

enum class RegretMode {
  // Deviations move the aggregator (the deviator's p and row change).
  kStandard,
  // Aggregators stay at their current values.
  kAggregative,
};

struct RegretReport {
  std::vector<double> per_user;
  double max = 0.0;
};

// Largest unilateral gain in expected utility for each user, over every
// action and pure channel choice, with everyone else held at `strategies`.
// Throws SizeError when n^2 m k exceeds the brute-force budget.
RegretReport MeasureRegret(const GameSpec& game, const Matrix& strategies,
                           RegretMode mode = RegretMode::kStandard);

// Regret of user i's current row when channel aggregators are pinned to
// `aggregators` (one per channel).
double AggregativeRegretAt(const GameSpec& game, std::size_t i,
                           const Matrix& strategies,
                           const std::vector<double>& aggregators);

// Pure profile: every user's action and single channel.
struct PureProfile {
  std::vector<int> action;
  std::vector<int> channel;
};

double PureUtility(const GameSpec& game, const PureProfile& profile,
                   std::size_t i);

struct PureRegrets {
  std::vector<double> standard;
  std::vector<double> aggregative;
};

PureRegrets MeasurePureRegrets(const GameSpec& game,
                               const PureProfile& profile);

// All (m k)^n pure profiles. Throws SizeError beyond 10^6 profiles.
std::vector<PureProfile> EnumeratePureProfiles(const GameSpec& game);

}  // namespace spectrum

#endif  // SPECTRUM_EQUILIBRIUM_H_
