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

#include "spectrum/mediator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "spectrum/errors.h"

namespace spectrum {
namespace {

constexpr double kSignificance = 0.05;

bool IsStochastic(std::span<const double> row) {
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= kIdentityTolerance;
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments SampleMoments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / (xs.size() - 1));
  return m;
}

}  // namespace

std::vector<Report> CollectReports(const Matrix& profiles,
                                   const std::vector<bool>& opt_in) {
  if (opt_in.size() != profiles.rows()) {
    throw ParameterError("one opt-in flag per user required");
  }
  std::vector<Report> reports(profiles.rows());
  for (std::size_t i = 0; i < profiles.rows(); ++i) {
    reports[i].user = static_cast<int>(i);
    if (!opt_in[i]) continue;
    const auto row = profiles.row(i);
    if (!IsStochastic(row)) {
      Warn("report of user " + std::to_string(i) +
           " is not a probability row; treating the user as opting out");
      continue;
    }
    reports[i].row.emplace(row.begin(), row.end());
  }
  return reports;
}

MixedStrategyProfile ReportedProfile(const std::vector<Report>& reports,
                                     int k) {
  MixedStrategyProfile profile = MixedStrategyProfile::Uniform(reports.size(), k);
  for (const Report& r : reports) {
    if (r.user < 0 || static_cast<std::size_t>(r.user) >= reports.size()) {
      throw ParameterError("report user id out of range");
    }
    if (!r.opted_in()) {
      profile.opt_out[r.user] = true;
      continue;
    }
    if (r.row->size() != static_cast<std::size_t>(k)) {
      throw ParameterError("report row has the wrong length");
    }
    std::copy(r.row->begin(), r.row->end(),
              profile.probabilities.row(r.user).begin());
  }
  return profile;
}

ConstraintSet BuildConstraintSet(const GameSpec& game, std::size_t i,
                                 const SetValuedTarget& targets, double xi,
                                 bool opt_out, bool* fallback) {
  if (fallback) *fallback = false;
  if (opt_out) return ConstraintSet::OptOut(game.k);
  ConstraintSet cset = ConstraintSet::Full(game.k);
  const int played = game.played_action[i];
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> shortfall(game.k, inf);
  for (int d = 0; d < game.k; ++d) {
    const std::vector<int> br =
        BestResponseSet(game, i, d, targets.target(i, d), xi);
    cset.allowed[d] = std::find(br.begin(), br.end(), played) != br.end();
    const double own = ActionRate(game, i, played, d);
    if (cset.allowed[d] || !(own > 0.0)) continue;
    double best = 0.0;
    for (int j = 0; j < game.m; ++j) {
      best = std::max(best, ActionRate(game, i, j, d));
    }
    shortfall[d] = std::log(best) - std::log(own) - xi;
  }
  if (cset.support_size() > 0) return cset;

  const double least = *std::min_element(shortfall.begin(), shortfall.end());
  if (!std::isfinite(least)) {
    throw DegenerateSupportError("user " + std::to_string(i) +
                                 " has no channel with a positive rate");
  }
  for (int d = 0; d < game.k; ++d) {
    cset.allowed[d] = shortfall[d] <= least + 1e-12;
  }
  if (fallback) *fallback = true;
  Warn("no channel admits user " + std::to_string(i) +
       "'s action as a best response; using the closest channels");
  return cset;
}

Suggestions IssueSuggestions(const Matrix& learned,
                             const std::vector<bool>& opt_in) {
  if (opt_in.size() != learned.rows()) {
    throw ParameterError("one opt-in flag per user required");
  }
  Suggestions out;
  out.rows = learned;
  out.kind.assign(learned.rows(), SuggestionKind::kFixed);
  const double uniform = 1.0 / static_cast<double>(learned.cols());
  for (std::size_t i = 0; i < learned.rows(); ++i) {
    if (opt_in[i]) {
      out.kind[i] = SuggestionKind::kUserSpecific;
    } else {
      std::fill(out.rows.row(i).begin(), out.rows.row(i).end(), uniform);
    }
  }
  return out;
}

EpochResult RunEpoch(const GameSpec& game, const std::vector<Report>& reports,
                     const PrivacyBudget& privacy, double beta,
                     const NoiseControl& noise, const EpochOptions& options) {
  game.Validate();
  if (reports.size() != static_cast<std::size_t>(game.n)) {
    throw ParameterError("one report per user required");
  }
  const MixedStrategyProfile reported = ReportedProfile(reports, game.k);

  EpochResult r;
  r.seed = noise.seed;
  r.budget = EtaBudget(game.n, game.m, game.k, game.gamma, game.alpha, beta,
                       privacy.epsilon, privacy.delta, options.periods);
  r.grid = BuildGrid(game.n, game.gamma, game.alpha);
  const Matrix strategies = reported.WithOptOutUniform();
  r.targets = SelectTargets(r.grid, game.Contention(), strategies, game.gamma,
                            options.threshold.value_or(game.alpha),
                            privacy.epsilon, noise);
  r.sparcost_fallbacks = r.targets.fallback_count;

  r.csets.reserve(game.n);
  for (int i = 0; i < game.n; ++i) {
    bool fallback = false;
    r.csets.push_back(BuildConstraintSet(game, i, r.targets, r.budget.xi,
                                         reported.opt_out[i], &fallback));
    if (fallback) ++r.support_fallbacks;
  }

  r.params = MakeLearnerParams(game.n, game.k, game.gamma, beta,
                               privacy.epsilon, privacy.delta, options.periods);
  r.params.flip_sign = options.flip_sign;

  RexpInputs in;
  in.game = &game;
  in.grid = &r.grid;
  in.targets = &r.targets;
  in.csets = &r.csets;
  in.ceiling_offset = game.alpha + r.budget.e1;
  r.learner = MwRun(in, r.params, noise);

  std::vector<bool> opt_in(game.n);
  for (int i = 0; i < game.n; ++i) opt_in[i] = !reported.opt_out[i];
  r.suggestions = IssueSuggestions(r.learner.suggestion, opt_in);

  r.privacy.sparcost_epsilon = privacy.epsilon;
  r.privacy.rexp_epsilon = privacy.epsilon;
  r.privacy.per_round_epsilon = r.params.epsilon0;
  r.privacy.delta = privacy.delta;

  if (options.measure_regret) {
    r.regret = MeasureRegret(game, r.suggestions.rows);
  }
  return r;
}

std::vector<std::vector<double>> PublishedRows(const Trajectory& trajectory,
                                               std::size_t i) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trajectory.published.size());
  for (const Matrix& q : trajectory.published) {
    const auto row = q.row(i);
    rows.emplace_back(row.begin(), row.end());
  }
  return rows;
}

std::vector<double> RecomputeSuggestionRow(
    const GameSpec& game, std::size_t i, const SetValuedTarget& targets,
    double xi, const std::vector<std::vector<double>>& published,
    const LearnerParams& params) {
  const ConstraintSet cset =
      BuildConstraintSet(game, i, targets, xi, /*opt_out=*/false);
  return ReplayUserRow(PlayedLogRates(game, i), cset, published, params);
}

std::vector<bool> AssignOptIn(int n, double ratio, std::uint64_t seed) {
  if (n < 0) throw ParameterError("n must be nonnegative");
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw ParameterError("opt-in ratio outside [0, 1]");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  KeyedStream stream({seed, StreamTag::kOptInAssignment, 0, 0, 0});
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(
        std::min<double>(i, std::floor(stream.NextOpenUniform() * (i + 1))));
    std::swap(order[i], order[j]);
  }
  const auto count = static_cast<int>(std::llround(ratio * n));
  std::vector<bool> opt_in(n, false);
  for (int r = 0; r < count; ++r) opt_in[order[r]] = true;
  return opt_in;
}

TruthfulnessResult TruthfulnessExperiment(const ScenarioSpec& spec,
                                          double optin_ratio, int runs,
                                          bool noise_enabled) {
  if (runs < 1) throw ParameterError("truthfulness experiment needs runs >= 1");
  TruthfulnessResult out;
  out.optin_ratio = optin_ratio;
  out.runs = runs;
  std::vector<double> in_means;
  std::vector<double> out_means;

  for (int run = 0; run < runs; ++run) {
    ScenarioSpec run_spec = spec;
    run_spec.seed = DeriveSeed(spec.seed, static_cast<std::uint64_t>(run));
    const Scenario scenario = GenScenario(run_spec);
    const GameSpec& game = scenario.game;
    const std::vector<bool> opt_in =
        AssignOptIn(game.n, optin_ratio, run_spec.seed);
    const std::vector<Report> reports =
        CollectReports(scenario.submitted.probabilities, opt_in);
    EpochOptions options;
    options.periods = spec.periods;
    options.threshold = spec.sparcost_threshold;
    const EpochResult epoch =
        RunEpoch(game, reports, {spec.epsilon, spec.delta, 0.0}, spec.beta,
                 {run_spec.seed, noise_enabled}, options);

    Matrix played = scenario.submitted.probabilities;
    for (int i = 0; i < game.n; ++i) {
      if (!reports[i].opted_in()) continue;
      const auto row = epoch.suggestions.rows.row(i);
      std::copy(row.begin(), row.end(), played.row(i).begin());
    }
    const ContributionTable q(game.Contention());
    double in_sum = 0.0;
    double out_sum = 0.0;
    int in_count = 0;
    for (int i = 0; i < game.n; ++i) {
      const double u =
          ExpectedUtility(game, i, game.played_action[i], q, played);
      if (reports[i].opted_in()) {
        in_sum += u;
        ++in_count;
      } else {
        out_sum += u;
      }
    }
    const int out_count = game.n - in_count;
    if (in_count > 0) in_means.push_back(in_sum / in_count);
    if (out_count > 0) out_means.push_back(out_sum / out_count);
    if (in_count > 0 && out_count > 0) {
      out.per_run_gap.push_back(in_sum / in_count - out_sum / out_count);
    }
  }

  if (!in_means.empty()) out.mean_utility_optin = SampleMoments(in_means).mean;
  if (!out_means.empty()) {
    out.mean_utility_optout = SampleMoments(out_means).mean;
  }
  if (out.per_run_gap.empty()) return out;
  const Moments gap = SampleMoments(out.per_run_gap);
  out.gap = gap.mean;
  const std::size_t count = out.per_run_gap.size();
  if (count < 2) return out;
  if (gap.sd == 0.0) {
    out.t_statistic = gap.mean > 0.0   ? std::numeric_limits<double>::infinity()
                      : gap.mean < 0.0 ? -std::numeric_limits<double>::infinity()
                                       : 0.0;
    out.p_value = gap.mean > 0.0 ? 0.0 : (gap.mean < 0.0 ? 1.0 : 0.5);
  } else {
    const double t = gap.mean / (gap.sd / std::sqrt(static_cast<double>(count)));
    const boost::math::students_t dist(static_cast<double>(count - 1));
    out.t_statistic = t;
    out.p_value = boost::math::cdf(boost::math::complement(dist, t));
  }
  out.significant = *out.p_value < kSignificance;
  return out;
}

}  // namespace spectrum
