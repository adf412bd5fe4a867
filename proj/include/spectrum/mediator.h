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

// The mediator epoch: reports in, private targets and learning, one
// suggestion row per user out.

#ifndef SPECTRUM_MEDIATOR_H_
#define SPECTRUM_MEDIATOR_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "spectrum/dp_mechanisms.h"
#include "spectrum/equilibrium.h"
#include "spectrum/learning.h"
#include "spectrum/model.h"
#include "spectrum/scenario.h"

namespace spectrum {

// An opt-in report carries a row; opt-out is the empty optional.
struct Report {
  int user = 0;
  std::optional<std::vector<double>> row;

  bool opted_in() const { return row.has_value(); }
};

// Opt-in rows pass through. A row that is not stochastic within
// kIdentityTolerance is dropped with a warning and the user is treated as
// opting out.
std::vector<Report> CollectReports(const Matrix& profiles,
                                   const std::vector<bool>& opt_in);

// Reports as a strategy profile, with 1/k rows for opt-out users.
MixedStrategyProfile ReportedProfile(const std::vector<Report>& reports,
                                     int k);

enum class SuggestionKind { kUserSpecific, kFixed };

struct Suggestions {
  Matrix rows;
  std::vector<SuggestionKind> kind;
};

struct EpochOptions {
  std::optional<int> periods;
  // SparCost threshold; alpha when unset.
  std::optional<double> threshold;
  bool flip_sign = false;
  // Run MeasureRegret on the suggestions (small instances only).
  bool measure_regret = false;
};

struct PrivacyLedger {
  double sparcost_epsilon = 0.0;
  double rexp_epsilon = 0.0;
  double per_round_epsilon = 0.0;
  double delta = 0.0;

  double total_epsilon() const { return sparcost_epsilon + rexp_epsilon; }
};

struct EpochResult {
  std::uint64_t seed = 0;
  ApproximationBudget budget;
  LearnerParams params;
  AggregatorGrid grid;
  SetValuedTarget targets;
  std::vector<ConstraintSet> csets;
  LearnerOutput learner;
  Suggestions suggestions;
  PrivacyLedger privacy;
  int sparcost_fallbacks = 0;
  int support_fallbacks = 0;
  std::optional<RegretReport> regret;
};

// Allowed channels for one user: those where the played action lies in the
// xi-aggregative best-response set at the user's target. When none qualify,
// the channels with the smallest shortfall are used and a warning is
// emitted; `fallback` reports that case.
ConstraintSet BuildConstraintSet(const GameSpec& game, std::size_t i,
                                 const SetValuedTarget& targets, double xi,
                                 bool opt_out, bool* fallback = nullptr);

EpochResult RunEpoch(const GameSpec& game, const std::vector<Report>& reports,
                     const PrivacyBudget& privacy, double beta,
                     const NoiseControl& noise, const EpochOptions& options = {});

// Learned rows for opt-in users, the uniform row for everyone else.
Suggestions IssueSuggestions(const Matrix& learned,
                             const std::vector<bool>& opt_in);

// User i's suggestion rebuilt from its own game data and what the mediator
// published.
std::vector<double> RecomputeSuggestionRow(
    const GameSpec& game, std::size_t i, const SetValuedTarget& targets,
    double xi, const std::vector<std::vector<double>>& published,
    const LearnerParams& params);

// Published aggregators of user i, one row per period.
std::vector<std::vector<double>> PublishedRows(const Trajectory& trajectory,
                                               std::size_t i);

// Opt-in set of one run: the first round(ratio * n) users of a seeded
// permutation. Sets for larger ratios contain the smaller ones.
std::vector<bool> AssignOptIn(int n, double ratio, std::uint64_t seed);

struct TruthfulnessResult {
  double optin_ratio = 0.0;
  int runs = 0;
  std::optional<double> mean_utility_optin;
  std::optional<double> mean_utility_optout;
  // Mean over runs of (opt-in group mean - opt-out group mean).
  std::optional<double> gap;
  std::optional<double> t_statistic;
  // One-sided, alternative gap > 0.
  std::optional<double> p_value;
  bool significant = false;
  std::vector<double> per_run_gap;
};

// Per run: a fresh scenario from DeriveSeed(spec.seed, run) and one epoch.
// Opt-in users then play their suggestions while opt-out users keep their
// submitted rows. Reports group mean expected utilities and a paired
// one-sided t-test at 5%.
TruthfulnessResult TruthfulnessExperiment(const ScenarioSpec& spec,
                                          double optin_ratio, int runs,
                                          bool noise_enabled = true);

}  // namespace spectrum

#endif  // SPECTRUM_MEDIATOR_H_
