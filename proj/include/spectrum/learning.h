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

// Multiplicative-weights channel learning. Each period publishes one
// privately selected aggregator per (user, channel) and every opt-in user
// updates its own row from those published values alone.

#ifndef SPECTRUM_LEARNING_H_
#define SPECTRUM_LEARNING_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spectrum/dp_mechanisms.h"
#include "spectrum/equilibrium.h"
#include "spectrum/model.h"

namespace spectrum {

struct LearnerParams {
  int periods = 1;
  // Update step of the multiplicative weights, E2 / (4 n gamma).
  double step = 0.0;
  double epsilon0 = 0.0;
  // The learning error E2 the horizon and step were derived from.
  double e2 = 0.0;
  // exp(+step * loss) instead of exp(-step * loss).
  bool flip_sign = false;
};

// Horizon, step and per-round budget from SolveE2, or from E2ForPeriods when
// a horizon is forced.
LearnerParams MakeLearnerParams(int n, int k, double gamma, double beta,
                                double epsilon, double delta,
                                std::optional<int> periods = {});

struct ConstraintSet {
  std::vector<bool> allowed;
  // Upper bound per channel; 1 unless tightened.
  std::vector<double> caps;
  bool opt_out = false;

  static ConstraintSet Full(int k);
  static ConstraintSet OptOut(int k);

  int support_size() const;
  // Nonnegative, sums to 1, zero off the support, within caps.
  bool Contains(std::span<const double> row, double tol = 1e-9) const;
};

struct Trajectory {
  // P^1 ... P^{T+1}.
  std::vector<Matrix> played;
  // Aggregator published for each (user, channel) in period t. Entries for
  // opt-out users and disallowed channels are 0 and never read.
  std::vector<Matrix> published;
  // Loss row each user applied in period t.
  std::vector<Matrix> losses;

  int periods() const { return static_cast<int>(published.size()); }
};

// gamma * sum_l q_row[l] * column[l] - lambda.
double ScoreF(std::span<const double> column, std::span<const double> q_row,
              double lambda, double gamma);

// Score of grid value c against the actual aggregator and the ceiling
// lambda: -|actual - c| - max(0, c - lambda). Moves by at most gamma when
// one user's row changes.
double RexpScore(double candidate, double actual, double lambda);

struct RexpInputs {
  const GameSpec* game = nullptr;
  const AggregatorGrid* grid = nullptr;
  const SetValuedTarget* targets = nullptr;
  const std::vector<ConstraintSet>* csets = nullptr;
  // alpha + E1, added to q_hat to form lambda.
  double ceiling_offset = 0.0;
};

// One period of private aggregator selection from profile `current`. Rows
// are users, columns channels. Period is 1-based.
Matrix RexpRound(const RexpInputs& in, const Matrix& current, int period,
                 double epsilon0, const NoiseControl& noise);

// Normalized utility deficit of each allowed channel against the best
// allowed channel, with utility log(rate) + published aggregator. Values lie
// in [0, 1]; disallowed channels get 1 and an all-equal row gets 0.
std::vector<double> ChannelLosses(std::span<const double> log_rates,
                                  std::span<const double> published,
                                  const ConstraintSet& cset);

// row * exp(-step * loss), or exp(+step * loss) when flip_sign is set.
std::vector<double> MwUpdate(std::span<const double> row,
                             std::span<const double> loss, double step,
                             bool flip_sign = false);

// KL projection onto the constraint set: zero the disallowed entries,
// normalize, then clip at the caps and renormalize the rest until feasible.
// Opt-out sets always yield the uniform row. Throws DegenerateSupportError
// when no mass lies on the support.
std::vector<double> KlProject(std::span<const double> weights,
                              const ConstraintSet& cset);

// Loss, update and projection for one user in one period.
std::vector<double> AdvanceUserRow(std::span<const double> row,
                                   std::span<const double> log_rates,
                                   std::span<const double> published,
                                   const ConstraintSet& cset,
                                   const LearnerParams& params);

// Log rate of each channel for the user's played action; -inf where the
// rate is zero.
std::vector<double> PlayedLogRates(const GameSpec& game, std::size_t i);

struct LearnerOutput {
  // Average of P^2 ... P^{T+1}.
  Matrix suggestion;
  Trajectory trajectory;
};

LearnerOutput MwRun(const RexpInputs& in, const LearnerParams& params,
                    const NoiseControl& noise);

// A user's averaged row rebuilt from its constraint set, its own rates and
// the published aggregators of its row.
std::vector<double> ReplayUserRow(std::span<const double> log_rates,
                                  const ConstraintSet& cset,
                                  const std::vector<std::vector<double>>& published,
                                  const LearnerParams& params);

struct CertificateEntry {
  bool holds = true;
  // bound - (average loss - best fixed comparator loss).
  double slack = 0.0;
};

// Checks (1/T) sum_t <P^t_i, l^t_i> <= min_P (1/T) sum_t <P, l^t_i> + bound
// for each opt-in user, with P ranging over the 0.05-step simplex grid on
// the user's support and bound = E2 / (2 n gamma). Throws SizeError when the
// comparator grid exceeds 10^6 points.
std::vector<CertificateEntry> RegretCertificate(
    const Trajectory& trajectory, const LearnerParams& params,
    const std::vector<ConstraintSet>& csets, int n, double gamma);

}  // namespace spectrum

#endif  // SPECTRUM_LEARNING_H_
