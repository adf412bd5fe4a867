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

#include "spectrum/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectrum/errors.h"

namespace spectrum {
namespace {

void RequireSize(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw ParameterError(std::string(what) + ": expected " +
                         std::to_string(expected) + " entries, got " +
                         std::to_string(actual));
  }
}

void RequireUser(std::size_t i, std::size_t n) {
  if (i >= n) throw ParameterError("user index out of range");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), data_(rows * cols, value) {}

Matrix Matrix::Uniform(std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, cols == 0 ? 0.0 : 1.0 / static_cast<double>(cols));
}

std::vector<double> Matrix::Column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

RadioParams RadioParams::Constant(int users, int actions, int channels,
                                  double bandwidth_hz, double tx_power_w,
                                  double channel_gain, double noise_w) {
  RadioParams radio;
  radio.users = users;
  radio.actions = actions;
  radio.channels = channels;
  const std::size_t uc = static_cast<std::size_t>(users) * channels;
  radio.bandwidth_hz.assign(uc, bandwidth_hz);
  radio.tx_power_w.assign(uc * actions, tx_power_w);
  radio.channel_gain.assign(uc, channel_gain);
  radio.noise_w.assign(uc, noise_w);
  return radio;
}

void RadioParams::Validate() const {
  if (users <= 0 || actions <= 0 || channels <= 0) {
    throw ParameterError("radio dimensions must be positive");
  }
  const std::size_t uc = static_cast<std::size_t>(users) * channels;
  RequireSize(bandwidth_hz.size(), uc, "bandwidth_hz");
  RequireSize(tx_power_w.size(), uc * actions, "tx_power_w");
  RequireSize(channel_gain.size(), uc, "channel_gain");
  RequireSize(noise_w.size(), uc, "noise_w");
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!std::all_of(bandwidth_hz.begin(), bandwidth_hz.end(), positive)) {
    throw ParameterError("bandwidth must be positive");
  }
  if (!std::all_of(tx_power_w.begin(), tx_power_w.end(), positive)) {
    throw ParameterError("transmit power must be positive");
  }
  if (!std::all_of(noise_w.begin(), noise_w.end(), positive)) {
    throw ParameterError("noise power must be positive");
  }
  if (!std::all_of(channel_gain.begin(), channel_gain.end(),
                   [](double g) { return g >= 0.0 && std::isfinite(g); })) {
    throw ParameterError("channel gain must be nonnegative");
  }
}

double ClampContention(double p) {
  return std::clamp(p, kMinContentionProb, 1.0 - kMinContentionProb);
}

ContentionProfile::ContentionProfile(std::vector<double> p) : p_(std::move(p)) {
  for (double& v : p_) {
    if (!(v > 0.0 && v < 1.0)) {
      throw ParameterError("contention probability outside (0, 1): " +
                           std::to_string(v));
    }
    v = ClampContention(v);
  }
}

ContentionProfile ContentionProfile::With(std::size_t i, double p_i) const {
  RequireUser(i, p_.size());
  std::vector<double> copy = p_;
  copy[i] = p_i;
  return ContentionProfile(std::move(copy));
}

MixedStrategyProfile MixedStrategyProfile::Uniform(std::size_t users,
                                                   std::size_t channels) {
  return {Matrix::Uniform(users, channels), std::vector<bool>(users, false)};
}

void MixedStrategyProfile::Validate() const {
  RequireSize(opt_out.size(), probabilities.rows(), "opt_out");
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    double sum = 0.0;
    for (double v : probabilities.row(i)) {
      if (v < 0.0 || v > 1.0) {
        throw ParameterError("strategy entry outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kIdentityTolerance) {
      throw ParameterError("strategy row " + std::to_string(i) +
                           " does not sum to 1");
    }
  }
}

Matrix MixedStrategyProfile::WithOptOutUniform() const {
  Matrix out = probabilities;
  const double u = 1.0 / static_cast<double>(out.cols());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    if (i < opt_out.size() && opt_out[i]) {
      std::fill(out.row(i).begin(), out.row(i).end(), u);
    }
  }
  return out;
}

void GameSpec::Validate() const {
  if (n <= 0 || m <= 0 || k <= 0) {
    throw ParameterError("n, m and k must be positive");
  }
  if (!(gamma > 0.0) || !(alpha > 0.0)) {
    throw ParameterError("gamma and alpha must be positive");
  }
  if (alpha > n * gamma * (1.0 + 1e-12)) {
    throw ParameterError("alpha must not exceed n * gamma");
  }
  if (radio.users != n || radio.actions != m || radio.channels != k) {
    throw ParameterError("radio dimensions disagree with the game");
  }
  radio.Validate();
  RequireSize(actions.size(), n, "actions");
  RequireSize(played_action.size(), n, "played_action");
  for (int i = 0; i < n; ++i) {
    RequireSize(actions[i].size(), m, "actions per user");
    for (const ActionSpec& a : actions[i]) {
      if (a.index < 0 || a.index >= m) {
        throw ParameterError("action power selector out of range");
      }
      if (!(a.contention_prob > 0.0 && a.contention_prob < 1.0)) {
        throw ParameterError("action contention probability outside (0, 1)");
      }
    }
    if (played_action[i] < 0 || played_action[i] >= m) {
      throw ParameterError("played action out of range");
    }
  }
}

ContentionProfile GameSpec::Contention() const {
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) {
    p[i] = actions[i][played_action[i]].contention_prob;
  }
  return ContentionProfile(std::move(p));
}

double ShannonRate(const RadioParams& radio, int user, int action,
                   int channel) {
  const double b = radio.bandwidth(user, channel);
  const double w = radio.noise(user, channel);
  if (!(b > 0.0) || !(w > 0.0)) {
    throw ParameterError("bandwidth and noise must be positive");
  }
  const double snr =
      radio.power(user, action, channel) * radio.gain(user, channel) / w;
  return b * std::log2(1.0 + snr);
}

double ActionRate(const GameSpec& game, std::size_t i, int j, int d) {
  RequireUser(i, game.actions.size());
  return ShannonRate(game.radio, static_cast<int>(i), game.actions[i][j].index,
                     d);
}

double PureThroughput(double rate, std::size_t user,
                      const ContentionProfile& p,
                      const std::vector<bool>& contenders) {
  RequireUser(user, p.size());
  if (!contenders.empty()) RequireSize(contenders.size(), p.size(), "mask");
  double product = 1.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (l == user) continue;
    if (!contenders.empty() && !contenders[l]) continue;
    product *= 1.0 - p[l];
  }
  return rate * p[user] * product;
}

ContributionTable::ContributionTable(const ContentionProfile& p)
    : log_p_(p.size()), log_1mp_(p.size()) {
  for (std::size_t l = 0; l < p.size(); ++l) {
    log_p_[l] = std::log(p[l]);
    log_1mp_[l] = std::log1p(-p[l]);
    sum_log_1mp_ += log_1mp_[l];
  }
}

double ContributionTable::operator()(std::size_t i, std::size_t l) const {
  const double denom = log_p_[i] + (sum_log_1mp_ - log_1mp_[i]);
  if (denom == 0.0) throw SingularityError("zero contention normalizer");
  return (l == i ? log_p_[i] : log_1mp_[l]) / denom;
}

std::vector<double> ContributionTable::Row(std::size_t i) const {
  RequireUser(i, size());
  std::vector<double> row(size());
  for (std::size_t l = 0; l < size(); ++l) row[l] = (*this)(i, l);
  return row;
}

double ContributionTable::Weighted(std::size_t i,
                                   std::span<const double> weights,
                                   double gamma) const {
  RequireSize(weights.size(), size(), "channel probabilities");
  const double denom = log_p_[i] + (sum_log_1mp_ - log_1mp_[i]);
  if (denom == 0.0) throw SingularityError("zero contention normalizer");
  double acc = 0.0;
  for (std::size_t l = 0; l < size(); ++l) {
    acc += (l == i ? log_p_[i] : log_1mp_[l]) * weights[l];
  }
  return gamma * acc / denom;
}

double QContribution(std::size_t i, std::size_t l,
                     const ContentionProfile& p) {
  RequireUser(i, p.size());
  RequireUser(l, p.size());
  double denom = std::log(p[i]);
  for (std::size_t o = 0; o < p.size(); ++o) {
    if (o != i) denom += std::log1p(-p[o]);
  }
  if (denom == 0.0) throw SingularityError("zero contention normalizer");
  const double numer = (l == i) ? std::log(p[i]) : std::log1p(-p[l]);
  return numer / denom;
}

double AggregatorPure(std::size_t i, const ContentionProfile& p, double gamma,
                      const std::vector<bool>& contenders) {
  RequireUser(i, p.size());
  if (contenders.empty()) {
    std::vector<double> ones(p.size(), 1.0);
    return ContributionTable(p).Weighted(i, ones, gamma);
  }
  RequireSize(contenders.size(), p.size(), "mask");
  std::vector<double> mask(p.size());
  for (std::size_t l = 0; l < p.size(); ++l) mask[l] = contenders[l] ? 1 : 0;
  return ContributionTable(p).Weighted(i, mask, gamma);
}

double AggregatorMixed(std::size_t i, const ContentionProfile& p,
                       std::span<const double> channel_probs, double gamma) {
  RequireUser(i, p.size());
  return ContributionTable(p).Weighted(i, channel_probs, gamma);
}

double UtilityAt(double rate, double aggregator) {
  if (!(rate > 0.0)) {
    throw SingularityError("utility undefined for a zero data rate");
  }
  return std::log(rate) + aggregator;
}

double ChannelUtility(const GameSpec& game, std::size_t i, int j, int d,
                      const ContentionProfile& p,
                      std::span<const double> channel_probs) {
  const double rate = ActionRate(game, i, j, d);
  return UtilityAt(rate, AggregatorMixed(i, p, channel_probs, game.gamma));
}

double ExpectedUtility(const GameSpec& game, std::size_t i, int j,
                       const ContentionProfile& p, const Matrix& strategies) {
  return ExpectedUtility(game, i, j, ContributionTable(p), strategies);
}

double ExpectedUtility(const GameSpec& game, std::size_t i, int j,
                       const ContributionTable& q, const Matrix& strategies) {
  RequireUser(i, q.size());
  RequireSize(strategies.rows(), q.size(), "strategy rows");
  double total = 0.0;
  std::vector<double> column(strategies.rows());
  for (std::size_t d = 0; d < strategies.cols(); ++d) {
    const double weight = strategies(i, d);
    if (weight == 0.0) continue;
    for (std::size_t l = 0; l < strategies.rows(); ++l) {
      column[l] = strategies(l, d);
    }
    const double rate = ActionRate(game, i, j, static_cast<int>(d));
    total += weight * UtilityAt(rate, q.Weighted(i, column, game.gamma));
  }
  return total;
}

}  // namespace spectrum
