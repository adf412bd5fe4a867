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

#include "spectrum/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectrum/errors.h"

namespace spectrum {
namespace {

constexpr double kGridSlack = 1e-9;
constexpr double kE2Tolerance = 1e-10;
constexpr int kE2MaxIterations = 10000;
constexpr double kRegretBudget = 5e7;
constexpr double kMaxPureProfiles = 1e6;

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive");
  }
}

std::vector<double> ColumnOf(const Matrix& strategies, std::size_t d) {
  return strategies.Column(d);
}

int PlayedAction(const GameSpec& game, std::size_t i) {
  return game.played_action[i];
}

}  // namespace

AggregatorGrid BuildGrid(int n, double gamma, double alpha) {
  if (n <= 0) throw ParameterError("n must be positive");
  RequirePositive(gamma, "gamma");
  RequirePositive(alpha, "alpha");
  const double span = n * gamma;
  const double ratio = span / alpha;
  if (ratio < 1.0 - kGridSlack) {
    throw ParameterError("alpha must not exceed n * gamma");
  }
  const auto steps = static_cast<std::size_t>(std::floor(ratio + kGridSlack));
  AggregatorGrid grid;
  grid.alpha = alpha;
  grid.values.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) grid.values[j] = j * alpha;
  if (std::abs(ratio - static_cast<double>(steps)) <= kGridSlack * ratio) {
    grid.values.back() = span;
  }
  return grid;
}

double ZetaBound(int n, int m, double gamma) {
  if (n < 1 || m < 1) throw ParameterError("n and m must be at least 1");
  return gamma * std::sqrt(8.0 * n * std::log(2.0 * m * n));
}

double CandidateCost(double q_hat, double aggregator) {
  return std::abs(aggregator - q_hat);
}

double CandidateCost(double q_hat, std::size_t i, int d,
                     const ContributionTable& q, const Matrix& strategies,
                     double gamma) {
  const std::vector<double> column = ColumnOf(strategies, d);
  return CandidateCost(q_hat, q.Weighted(i, column, gamma));
}

SetValuedTarget SelectTargets(const AggregatorGrid& grid,
                              const ContentionProfile& p,
                              const Matrix& strategies, double gamma,
                              double threshold, double epsilon,
                              const NoiseControl& noise) {
  if (grid.values.empty()) throw ParameterError("empty aggregator grid");
  if (strategies.rows() != p.size()) {
    throw ParameterError("strategy rows disagree with contention profile");
  }
  const ContributionTable q(p);
  SetValuedTarget out;
  out.n = static_cast<int>(strategies.rows());
  out.k = static_cast<int>(strategies.cols());
  out.threshold = threshold;
  const std::size_t cells = strategies.rows() * strategies.cols();
  out.q_hat.assign(cells, 0.0);
  out.cost.assign(cells, 0.0);
  out.grid_index.assign(cells, 0);
  out.fallback.assign(cells, false);

  std::vector<double> costs(grid.size());
  for (std::size_t d = 0; d < strategies.cols(); ++d) {
    const std::vector<double> column = ColumnOf(strategies, d);
    for (std::size_t i = 0; i < strategies.rows(); ++i) {
      const double actual = q.Weighted(i, column, gamma);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        costs[g] = CandidateCost(grid.values[g], actual);
      }
      KeyedStream stream =
          noise.Stream(StreamTag::kSparCostItem, static_cast<std::uint32_t>(i),
                       static_cast<std::uint32_t>(d));
      const SparCostResult result =
          SparCost(costs, threshold, epsilon, gamma, noise, stream);
      const std::size_t cell = i * strategies.cols() + d;
      if (result.exhausted()) {
        const auto best = static_cast<std::size_t>(
            std::min_element(costs.begin(), costs.end()) - costs.begin());
        out.grid_index[cell] = best;
        out.cost[cell] = costs[best];
        out.fallback[cell] = true;
        ++out.fallback_count;
      } else {
        out.grid_index[cell] = *result.accepted;
        out.cost[cell] = result.noisy_value;
      }
      out.q_hat[cell] = grid.values[out.grid_index[cell]];
    }
  }
  if (out.fallback_count > 0) {
    Warn("SparCost exhausted the grid for " +
         std::to_string(out.fallback_count) +
         " (user, channel) cells; used the noise-free argmin");
  }
  return out;
}

std::vector<int> BestResponseSet(const GameSpec& game, std::size_t i, int d,
                                 double q_hat, double xi) {
  if (!(xi >= 0.0)) throw ParameterError("xi must be nonnegative");
  if (game.m <= 0) throw ParameterError("empty action set");
  std::vector<double> utility(game.m, -std::numeric_limits<double>::infinity());
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < game.m; ++j) {
    const double rate = ActionRate(game, i, j, d);
    if (!(rate > 0.0)) continue;
    utility[j] = UtilityAt(rate, q_hat);
    best = std::max(best, utility[j]);
  }
  std::vector<int> out;
  if (!std::isfinite(best)) return out;
  for (int j = 0; j < game.m; ++j) {
    if (std::isfinite(utility[j]) && utility[j] >= best - xi) out.push_back(j);
  }
  return out;
}

E2Solution SolveE2(int n, int k, double gamma, double beta, double epsilon,
                   double delta) {
  if (n <= 0 || k <= 0) throw ParameterError("n and k must be positive");
  RequirePositive(gamma, "gamma");
  RequirePositive(epsilon, "epsilon");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta outside (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta outside (0, 1)");
  }
  E2Solution solution;
  if (k == 1) return solution;

  const double log_k = std::log(static_cast<double>(k));
  const double ng2 = n * gamma * gamma;
  // x = E2^2 satisfies x = c * (log_a - log x).
  const double c = 32.0 * std::sqrt(2.0) * ng2 *
                   std::sqrt(log_k * std::log(1.0 / delta)) / epsilon;
  const double horizon_scale = 16.0 * n * ng2 * log_k;
  const double log_a = std::log(2.0 * k * horizon_scale / beta);

  double y = 0.0;
  for (int it = 1; it <= kE2MaxIterations; ++it) {
    const double ey = std::exp(y);
    const double step = (ey + c * y - c * log_a) / (ey + c);
    y -= step;
    solution.iterations = it;
    if (std::abs(step) <= 2.0 * kE2Tolerance) {
      solution.e2 = std::exp(0.5 * y);
      solution.periods = horizon_scale / std::exp(y);
      return solution;
    }
  }
  throw NumericalError("E2 iteration did not converge");
}

int PrescribedPeriods(const E2Solution& solution) {
  const double t = std::ceil(solution.periods - kGridSlack);
  if (!(t < static_cast<double>(std::numeric_limits<int>::max()))) {
    throw NumericalError("prescribed horizon overflows");
  }
  return std::max(1, static_cast<int>(t));
}

double E2ForPeriods(int n, int k, double gamma, int periods) {
  if (n <= 0 || k <= 0) throw ParameterError("n and k must be positive");
  if (periods <= 0) throw ParameterError("periods must be positive");
  RequirePositive(gamma, "gamma");
  return 4.0 * n * gamma *
         std::sqrt(std::log(static_cast<double>(k)) / periods);
}

ApproximationBudget EtaBudget(int n, int m, int k, double gamma, double alpha,
                              double beta, double epsilon, double delta,
                              std::optional<int> periods_override) {
  ApproximationBudget b;
  b.zeta = ZetaBound(n, m, gamma);
  b.alpha = alpha;
  b.e1 = TotalSparseCostErrorBound(n, k, gamma, alpha, beta, epsilon);
  const E2Solution solution = SolveE2(n, k, gamma, beta, epsilon, delta);
  if (periods_override) {
    b.periods = *periods_override;
    b.e2 = E2ForPeriods(n, k, gamma, b.periods);
    b.periods_overridden = true;
  } else {
    b.periods = PrescribedPeriods(solution);
    b.e2 = solution.e2;
  }
  b.eta = b.zeta + b.alpha + b.e1 + b.e2;
  b.xi = gamma + 2.0 * alpha + b.zeta;
  return b;
}

RegretReport MeasureRegret(const GameSpec& game, const Matrix& strategies,
                           RegretMode mode) {
  const double n = game.n;
  if (n * n * game.m * game.k > kRegretBudget) {
    throw SizeError("instance too large for exhaustive deviation search");
  }
  if (strategies.rows() != static_cast<std::size_t>(game.n) ||
      strategies.cols() != static_cast<std::size_t>(game.k)) {
    throw ParameterError("strategy profile shape disagrees with the game");
  }
  const ContentionProfile p = game.Contention();
  const ContributionTable q(p);
  std::vector<std::vector<double>> columns(game.k);
  for (int d = 0; d < game.k; ++d) columns[d] = ColumnOf(strategies, d);

  RegretReport report;
  report.per_user.assign(game.n, 0.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(game.n); ++i) {
    const double current =
        ExpectedUtility(game, i, PlayedAction(game, i), q, strategies);
    double best = current;
    for (int j = 0; j < game.m; ++j) {
      if (mode == RegretMode::kAggregative) {
        for (int d = 0; d < game.k; ++d) {
          const double rate = ActionRate(game, i, j, d);
          if (!(rate > 0.0)) continue;
          best = std::max(best,
                          UtilityAt(rate, q.Weighted(i, columns[d], game.gamma)));
        }
        continue;
      }
      const ContributionTable deviated(
          p.With(i, game.actions[i][j].contention_prob));
      for (int d = 0; d < game.k; ++d) {
        const double rate = ActionRate(game, i, j, d);
        if (!(rate > 0.0)) continue;
        std::vector<double> column = columns[d];
        column[i] = 1.0;
        best = std::max(
            best, UtilityAt(rate, deviated.Weighted(i, column, game.gamma)));
      }
    }
    report.per_user[i] = std::max(0.0, best - current);
    report.max = std::max(report.max, report.per_user[i]);
  }
  return report;
}

double AggregativeRegretAt(const GameSpec& game, std::size_t i,
                           const Matrix& strategies,
                           const std::vector<double>& aggregators) {
  if (aggregators.size() != static_cast<std::size_t>(game.k)) {
    throw ParameterError("need one aggregator per channel");
  }
  const int played = PlayedAction(game, i);
  double current = 0.0;
  for (int d = 0; d < game.k; ++d) {
    const double w = strategies(i, d);
    if (w == 0.0) continue;
    current += w * UtilityAt(ActionRate(game, i, played, d), aggregators[d]);
  }
  double best = current;
  for (int j = 0; j < game.m; ++j) {
    for (int d = 0; d < game.k; ++d) {
      const double rate = ActionRate(game, i, j, d);
      if (!(rate > 0.0)) continue;
      best = std::max(best, UtilityAt(rate, aggregators[d]));
    }
  }
  return std::max(0.0, best - current);
}

namespace {

ContentionProfile PureContention(const GameSpec& game,
                                 const PureProfile& profile) {
  std::vector<double> p(game.n);
  for (int l = 0; l < game.n; ++l) {
    p[l] = game.actions[l][profile.action[l]].contention_prob;
  }
  return ContentionProfile(std::move(p));
}

std::vector<double> Occupancy(const PureProfile& profile, int d) {
  std::vector<double> column(profile.channel.size());
  for (std::size_t l = 0; l < column.size(); ++l) {
    column[l] = profile.channel[l] == d ? 1.0 : 0.0;
  }
  return column;
}

void ValidateProfile(const GameSpec& game, const PureProfile& profile) {
  if (profile.action.size() != static_cast<std::size_t>(game.n) ||
      profile.channel.size() != static_cast<std::size_t>(game.n)) {
    throw ParameterError("pure profile size disagrees with the game");
  }
  for (int l = 0; l < game.n; ++l) {
    if (profile.action[l] < 0 || profile.action[l] >= game.m ||
        profile.channel[l] < 0 || profile.channel[l] >= game.k) {
      throw ParameterError("pure profile entry out of range");
    }
  }
}

}  // namespace

double PureUtility(const GameSpec& game, const PureProfile& profile,
                   std::size_t i) {
  ValidateProfile(game, profile);
  const int d = profile.channel[i];
  const ContributionTable q(PureContention(game, profile));
  return UtilityAt(ActionRate(game, i, profile.action[i], d),
                   q.Weighted(i, Occupancy(profile, d), game.gamma));
}

PureRegrets MeasurePureRegrets(const GameSpec& game,
                               const PureProfile& profile) {
  ValidateProfile(game, profile);
  const ContributionTable q(PureContention(game, profile));
  PureRegrets out;
  out.standard.assign(game.n, 0.0);
  out.aggregative.assign(game.n, 0.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(game.n); ++i) {
    const double current = PureUtility(game, profile, i);
    std::vector<double> fixed(game.k);
    for (int d = 0; d < game.k; ++d) {
      fixed[d] = q.Weighted(i, Occupancy(profile, d), game.gamma);
    }
    double best_standard = current;
    double best_aggregative = current;
    PureProfile deviated = profile;
    for (int j = 0; j < game.m; ++j) {
      for (int d = 0; d < game.k; ++d) {
        deviated.action[i] = j;
        deviated.channel[i] = d;
        best_standard =
            std::max(best_standard, PureUtility(game, deviated, i));
        best_aggregative = std::max(
            best_aggregative, UtilityAt(ActionRate(game, i, j, d), fixed[d]));
      }
    }
    out.standard[i] = best_standard - current;
    out.aggregative[i] = best_aggregative - current;
  }
  return out;
}

std::vector<PureProfile> EnumeratePureProfiles(const GameSpec& game) {
  const double per_user = static_cast<double>(game.m) * game.k;
  if (std::pow(per_user, game.n) > kMaxPureProfiles) {
    throw SizeError("too many pure profiles to enumerate");
  }
  const auto choices = static_cast<std::size_t>(per_user);
  std::size_t total = 1;
  for (int l = 0; l < game.n; ++l) total *= choices;
  std::vector<PureProfile> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    PureProfile profile;
    profile.action.resize(game.n);
    profile.channel.resize(game.n);
    std::size_t rest = code;
    for (int l = 0; l < game.n; ++l) {
      const std::size_t c = rest % choices;
      rest /= choices;
      profile.action[l] = static_cast<int>(c / game.k);
      profile.channel[l] = static_cast<int>(c % game.k);
    }
    out.push_back(std::move(profile));
  }
  return out;
}

}  // namespace spectrum
