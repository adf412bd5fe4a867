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

#include "spectrum/learning.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectrum/errors.h"

namespace spectrum {
namespace {

constexpr double kComparatorStep = 0.05;
constexpr int kComparatorUnits = 20;
constexpr double kMaxComparators = 1e6;

void RequireSameSize(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ParameterError(std::string(what) + ": length mismatch");
}

// Visits every vector of `parts` nonnegative integers summing to `units`.
template <typename Fn>
void ForEachComposition(int units, int parts, std::vector<int>& buffer,
                        int index, Fn&& fn) {
  if (index == parts - 1) {
    buffer[index] = units;
    fn(buffer);
    return;
  }
  for (int u = 0; u <= units; ++u) {
    buffer[index] = u;
    ForEachComposition(units - u, parts, buffer, index + 1, fn);
  }
}

double Binomial(int n, int r) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) -
                  std::lgamma(n - r + 1.0));
}

}  // namespace

LearnerParams MakeLearnerParams(int n, int k, double gamma, double beta,
                                double epsilon, double delta,
                                std::optional<int> periods) {
  LearnerParams params;
  if (periods) {
    params.periods = *periods;
    params.e2 = E2ForPeriods(n, k, gamma, params.periods);
  } else {
    const E2Solution solution = SolveE2(n, k, gamma, beta, epsilon, delta);
    params.periods = PrescribedPeriods(solution);
    params.e2 = solution.e2;
  }
  params.step = params.e2 / (4.0 * n * gamma);
  params.epsilon0 = PerRoundEpsilon(epsilon, params.periods, delta);
  return params;
}

ConstraintSet ConstraintSet::Full(int k) {
  return {std::vector<bool>(k, true), std::vector<double>(k, 1.0), false};
}

ConstraintSet ConstraintSet::OptOut(int k) {
  ConstraintSet cset = Full(k);
  cset.opt_out = true;
  return cset;
}

int ConstraintSet::support_size() const {
  return static_cast<int>(std::count(allowed.begin(), allowed.end(), true));
}

bool ConstraintSet::Contains(std::span<const double> row, double tol) const {
  if (row.size() != allowed.size()) return false;
  const double k = static_cast<double>(row.size());
  double sum = 0.0;
  for (std::size_t d = 0; d < row.size(); ++d) {
    if (row[d] < -tol) return false;
    if (opt_out && std::abs(row[d] - 1.0 / k) > tol) return false;
    if (!opt_out && !allowed[d] && std::abs(row[d]) > tol) return false;
    if (row[d] > caps[d] + tol) return false;
    sum += row[d];
  }
  return std::abs(sum - 1.0) <= tol;
}

double ScoreF(std::span<const double> column, std::span<const double> q_row,
              double lambda, double gamma) {
  RequireSameSize(column.size(), q_row.size(), "score inputs");
  double acc = 0.0;
  for (std::size_t l = 0; l < column.size(); ++l) acc += q_row[l] * column[l];
  return gamma * acc - lambda;
}

double RexpScore(double candidate, double actual, double lambda) {
  return -std::abs(actual - candidate) - std::max(0.0, candidate - lambda);
}

Matrix RexpRound(const RexpInputs& in, const Matrix& current, int period,
                 double epsilon0, const NoiseControl& noise) {
  const GameSpec& game = *in.game;
  const AggregatorGrid& grid = *in.grid;
  const ContributionTable q(game.Contention());
  Matrix published(current.rows(), current.cols(), 0.0);
  std::vector<double> scores(grid.size());
  for (std::size_t d = 0; d < current.cols(); ++d) {
    const std::vector<double> column = current.Column(d);
    for (std::size_t i = 0; i < current.rows(); ++i) {
      const ConstraintSet& cset = (*in.csets)[i];
      if (cset.opt_out || !cset.allowed[d]) continue;
      const double actual = q.Weighted(i, column, game.gamma);
      const double lambda =
          in.targets->target(i, static_cast<int>(d)) + in.ceiling_offset;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        scores[g] = RexpScore(grid.values[g], actual, lambda);
      }
      KeyedStream stream = noise.Stream(
          StreamTag::kRexp, static_cast<std::uint32_t>(i),
          static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(period));
      published(i, d) = grid.values[ExponentialSelect(
          scores, epsilon0, game.gamma, noise, stream)];
    }
  }
  return published;
}

std::vector<double> ChannelLosses(std::span<const double> log_rates,
                                  std::span<const double> published,
                                  const ConstraintSet& cset) {
  RequireSameSize(log_rates.size(), published.size(), "loss inputs");
  RequireSameSize(log_rates.size(), cset.allowed.size(), "constraint set");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> utility(log_rates.size(), -inf);
  double hi = -inf;
  double lo = inf;
  for (std::size_t d = 0; d < log_rates.size(); ++d) {
    if (!cset.allowed[d] || !std::isfinite(log_rates[d])) continue;
    utility[d] = log_rates[d] + published[d];
    hi = std::max(hi, utility[d]);
    lo = std::min(lo, utility[d]);
  }
  std::vector<double> loss(log_rates.size(), 1.0);
  for (std::size_t d = 0; d < log_rates.size(); ++d) {
    if (!std::isfinite(utility[d])) continue;
    loss[d] = hi > lo ? (hi - utility[d]) / (hi - lo) : 0.0;
  }
  return loss;
}

std::vector<double> MwUpdate(std::span<const double> row,
                             std::span<const double> loss, double step,
                             bool flip_sign) {
  RequireSameSize(row.size(), loss.size(), "update inputs");
  const double sign = flip_sign ? 1.0 : -1.0;
  std::vector<double> out(row.size());
  for (std::size_t d = 0; d < row.size(); ++d) {
    out[d] = row[d] * std::exp(sign * step * loss[d]);
  }
  return out;
}

std::vector<double> KlProject(std::span<const double> weights,
                              const ConstraintSet& cset) {
  const std::size_t k = weights.size();
  RequireSameSize(k, cset.allowed.size(), "constraint set");
  if (cset.opt_out) return std::vector<double>(k, 1.0 / k);
  std::vector<double> row(k, 0.0);
  double total = 0.0;
  double cap_total = 0.0;
  for (std::size_t d = 0; d < k; ++d) {
    if (weights[d] < 0.0) throw ParameterError("negative weight");
    if (!cset.allowed[d]) continue;
    row[d] = weights[d];
    total += weights[d];
    cap_total += cset.caps[d];
  }
  if (!(total > 0.0)) {
    throw DegenerateSupportError("no weight on the allowed channels");
  }
  if (cap_total < 1.0 - 1e-12) {
    throw ParameterError("channel caps admit no distribution");
  }
  for (double& v : row) v /= total;

  std::vector<bool> clipped(k, false);
  for (std::size_t pass = 0; pass < k; ++pass) {
    bool changed = false;
    double fixed = 0.0;
    double free = 0.0;
    for (std::size_t d = 0; d < k; ++d) {
      if (!clipped[d] && row[d] > cset.caps[d]) {
        clipped[d] = true;
        changed = true;
      }
      if (clipped[d]) {
        row[d] = cset.caps[d];
        fixed += row[d];
      } else {
        free += row[d];
      }
    }
    if (!changed) break;
    if (free > 0.0) {
      const double scale = (1.0 - fixed) / free;
      for (std::size_t d = 0; d < k; ++d) {
        if (!clipped[d]) row[d] *= scale;
      }
    }
  }
  return row;
}

std::vector<double> AdvanceUserRow(std::span<const double> row,
                                   std::span<const double> log_rates,
                                   std::span<const double> published,
                                   const ConstraintSet& cset,
                                   const LearnerParams& params) {
  if (cset.opt_out) return KlProject(row, cset);
  const std::vector<double> loss = ChannelLosses(log_rates, published, cset);
  return KlProject(MwUpdate(row, loss, params.step, params.flip_sign), cset);
}

std::vector<double> PlayedLogRates(const GameSpec& game, std::size_t i) {
  std::vector<double> out(game.k);
  const int played = game.played_action[i];
  for (int d = 0; d < game.k; ++d) {
    const double rate = ActionRate(game, i, played, d);
    out[d] = rate > 0.0 ? std::log(rate)
                        : -std::numeric_limits<double>::infinity();
  }
  return out;
}

namespace {

std::vector<double> InitialRow(const ConstraintSet& cset) {
  const std::size_t k = cset.allowed.size();
  return KlProject(std::vector<double>(k, 1.0 / k), cset);
}

}  // namespace

LearnerOutput MwRun(const RexpInputs& in, const LearnerParams& params,
                    const NoiseControl& noise) {
  const GameSpec& game = *in.game;
  const std::vector<ConstraintSet>& csets = *in.csets;
  if (csets.size() != static_cast<std::size_t>(game.n)) {
    throw ParameterError("need one constraint set per user");
  }
  if (params.periods <= 0) throw ParameterError("periods must be positive");
  const std::size_t n = game.n;
  const std::size_t k = game.k;

  std::vector<std::vector<double>> log_rates(n);
  Matrix start(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    log_rates[i] = PlayedLogRates(game, i);
    const std::vector<double> row = InitialRow(csets[i]);
    std::copy(row.begin(), row.end(), start.row(i).begin());
  }

  LearnerOutput out;
  Trajectory& tr = out.trajectory;
  tr.played.push_back(std::move(start));
  for (int t = 1; t <= params.periods; ++t) {
    const Matrix& current = tr.played.back();
    Matrix published = RexpRound(in, current, t, params.epsilon0, noise);
    Matrix losses(n, k, 0.0);
    Matrix next(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (!csets[i].opt_out) {
        const std::vector<double> loss =
            ChannelLosses(log_rates[i], published.row(i), csets[i]);
        std::copy(loss.begin(), loss.end(), losses.row(i).begin());
      }
      const std::vector<double> row = AdvanceUserRow(
          current.row(i), log_rates[i], published.row(i), csets[i], params);
      std::copy(row.begin(), row.end(), next.row(i).begin());
    }
    tr.published.push_back(std::move(published));
    tr.losses.push_back(std::move(losses));
    tr.played.push_back(std::move(next));
  }

  out.suggestion = Matrix(n, k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int t = 1; t <= params.periods; ++t) {
      for (std::size_t d = 0; d < k; ++d) {
        out.suggestion(i, d) += tr.played[t](i, d);
      }
    }
    for (std::size_t d = 0; d < k; ++d) {
      out.suggestion(i, d) /= params.periods;
    }
  }
  return out;
}

std::vector<double> ReplayUserRow(
    std::span<const double> log_rates, const ConstraintSet& cset,
    const std::vector<std::vector<double>>& published,
    const LearnerParams& params) {
  if (published.size() != static_cast<std::size_t>(params.periods)) {
    throw ParameterError("need one published row per period");
  }
  const std::size_t k = cset.allowed.size();
  std::vector<double> row = InitialRow(cset);
  std::vector<double> sum(k, 0.0);
  for (const std::vector<double>& q : published) {
    row = AdvanceUserRow(row, log_rates, q, cset, params);
    for (std::size_t d = 0; d < k; ++d) sum[d] += row[d];
  }
  for (double& v : sum) v /= params.periods;
  return sum;
}

std::vector<CertificateEntry> RegretCertificate(
    const Trajectory& trajectory, const LearnerParams& params,
    const std::vector<ConstraintSet>& csets, int n, double gamma) {
  const int periods = trajectory.periods();
  if (periods <= 0) throw ParameterError("empty trajectory");
  const double bound = params.e2 / (2.0 * n * gamma);
  std::vector<CertificateEntry> out(csets.size());
  for (std::size_t i = 0; i < csets.size(); ++i) {
    const ConstraintSet& cset = csets[i];
    if (cset.opt_out) {
      out[i].slack = bound;
      continue;
    }
    std::vector<int> support;
    for (std::size_t d = 0; d < cset.allowed.size(); ++d) {
      if (cset.allowed[d]) support.push_back(static_cast<int>(d));
    }
    const int s = static_cast<int>(support.size());
    if (Binomial(kComparatorUnits + s - 1, s - 1) > kMaxComparators) {
      throw SizeError("comparator grid too large");
    }
    // Cumulative loss per channel and the learner's own cumulative loss.
    std::vector<double> cumulative(cset.allowed.size(), 0.0);
    double learner = 0.0;
    for (int t = 0; t < periods; ++t) {
      for (std::size_t d = 0; d < cset.allowed.size(); ++d) {
        const double l = trajectory.losses[t](i, d);
        cumulative[d] += l;
        learner += trajectory.played[t](i, d) * l;
      }
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> units(s);
    ForEachComposition(kComparatorUnits, s, units, 0,
                       [&](const std::vector<int>& u) {
                         bool feasible = true;
                         double value = 0.0;
                         for (int r = 0; r < s; ++r) {
                           const double w = u[r] * kComparatorStep;
                           if (w > cset.caps[support[r]] + 1e-12) {
                             feasible = false;
                           }
                           value += w * cumulative[support[r]];
                         }
                         if (feasible) best = std::min(best, value);
                       });
    const double regret = (learner - best) / periods;
    out[i].slack = bound - regret;
    out[i].holds = out[i].slack >= 0.0;
  }
  return out;
}

}  // namespace spectrum
