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

// Network and game mathematics: Shannon rates, throughput, the normalized
// individual contention contributions q and the pure/mixed aggregators Q
// built from them, and the proportional-fair channel utility log C + Q.
//
// Logs are natural except inside the Shannon rate, which is log2.

#ifndef SPECTRUM_MODEL_H_
#define SPECTRUM_MODEL_H_

#include <cstddef>
#include <span>
#include <vector>

namespace spectrum {

// Contention probabilities are clamped to [kMinContentionProb,
// 1 - kMinContentionProb].
inline constexpr double kMinContentionProb = 1e-6;

// Tolerance for exact identities (row sums, normalization).
inline constexpr double kIdentityTolerance = 1e-9;

// Dense row-major matrix. Rows are users, columns are channels wherever a
// Matrix appears in this library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0);

  static Matrix Uniform(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> Column(std::size_t c) const;

  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Physical-layer parameters. Per (user, channel) arrays are indexed
// user * channels + channel; transmit power is indexed
// (user * actions + action) * channels + channel.
struct RadioParams {
  int users = 0;
  int actions = 0;
  int channels = 0;
  std::vector<double> bandwidth_hz;
  std::vector<double> tx_power_w;
  std::vector<double> channel_gain;
  std::vector<double> noise_w;

  // Every entry set to the given scalar.
  static RadioParams Constant(int users, int actions, int channels,
                              double bandwidth_hz, double tx_power_w,
                              double channel_gain, double noise_w);

  double bandwidth(int user, int channel) const {
    return bandwidth_hz[user * channels + channel];
  }
  double power(int user, int action, int channel) const {
    return tx_power_w[(user * actions + action) * channels + channel];
  }
  double gain(int user, int channel) const {
    return channel_gain[user * channels + channel];
  }
  double noise(int user, int channel) const {
    return noise_w[user * channels + channel];
  }

  // Throws ParameterError on wrong sizes or out-of-range values.
  void Validate() const;
};

struct ActionSpec {
  int index = 0;
  // Selects tx power via RadioParams::power(user, index, channel).
  double contention_prob = 0.5;
};

// Clamps p into [kMinContentionProb, 1 - kMinContentionProb].
double ClampContention(double p);

// The vector of channel contention probabilities of all users. Construction
// rejects values outside the open interval (0, 1) and clamps the rest.
class ContentionProfile {
 public:
  explicit ContentionProfile(std::vector<double> p);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const { return p_; }

  // Copy with user i's probability replaced.
  ContentionProfile With(std::size_t i, double p_i) const;

 private:
  std::vector<double> p_;
};

// n x k channel-access probabilities plus per-user opt-out markers.
struct MixedStrategyProfile {
  Matrix probabilities;
  std::vector<bool> opt_out;

  static MixedStrategyProfile Uniform(std::size_t users, std::size_t channels);

  // Every row nonnegative and summing to 1 within kIdentityTolerance.
  void Validate() const;

  // Rows flagged opt-out replaced by the uniform 1/k row.
  Matrix WithOptOutUniform() const;
};

// A game instance. played_action[i] is the action user i actually takes;
// it fixes both the user's contention probability and its transmit power.
struct GameSpec {
  int n = 0;
  int m = 0;
  int k = 0;
  double gamma = 0.0;
  double alpha = 0.0;
  RadioParams radio;
  std::vector<std::vector<ActionSpec>> actions;
  std::vector<int> played_action;

  void Validate() const;

  // Contention probabilities of the played actions.
  ContentionProfile Contention() const;
};

// B * log2(1 + phi * g / omega) in bit/s.
double ShannonRate(const RadioParams& radio, int user, int action,
                   int channel);

// Rate of user i playing action j (the action's power selector) on channel d.
double ActionRate(const GameSpec& game, std::size_t i, int j, int d);

// rate * p_i * prod_{l != i} (1 - p_l). When `contenders` is nonempty the
// product only runs over users flagged in it.
double PureThroughput(double rate, std::size_t user,
                      const ContentionProfile& p,
                      const std::vector<bool>& contenders = {});

// Normalized individual contention contribution q_i(p_l) seen from user i.
// With D = log p_i + sum_{l != i} log(1 - p_l), it is log p_i / D for l == i
// and log(1 - p_l) / D otherwise. Every value lies in [0, 1] and the n
// contributions of one user sum to 1.
double QContribution(std::size_t i, std::size_t l, const ContentionProfile& p);

// All q_i(p_l) for a profile, O(1) per lookup after O(n) setup.
class ContributionTable {
 public:
  explicit ContributionTable(const ContentionProfile& p);

  std::size_t size() const { return log_p_.size(); }
  double operator()(std::size_t i, std::size_t l) const;
  std::vector<double> Row(std::size_t i) const;

  // gamma * sum_l q(i, l) * weights[l].
  double Weighted(std::size_t i, std::span<const double> weights,
                  double gamma) const;

 private:
  std::vector<double> log_p_;
  std::vector<double> log_1mp_;
  double sum_log_1mp_ = 0.0;
};

// gamma * sum over contenders of q_i(p_l). Empty `contenders` means everyone
// contends, in which case the result is exactly gamma.
double AggregatorPure(std::size_t i, const ContentionProfile& p, double gamma,
                      const std::vector<bool>& contenders = {});

// gamma * sum_l q_i(p_l) * channel_probs[l], where channel_probs holds every
// user's probability of accessing the channel.
double AggregatorMixed(std::size_t i, const ContentionProfile& p,
                       std::span<const double> channel_probs, double gamma);

// log(rate) + aggregator. The utility is 1-Lipschitz in the aggregator.
double UtilityAt(double rate, double aggregator);

// Utility of user i playing action j on channel d when everyone's access
// probabilities for d are `channel_probs`.
double ChannelUtility(const GameSpec& game, std::size_t i, int j, int d,
                      const ContentionProfile& p,
                      std::span<const double> channel_probs);

// Expectation of ChannelUtility over user i's own row of `strategies`.
double ExpectedUtility(const GameSpec& game, std::size_t i, int j,
                       const ContentionProfile& p, const Matrix& strategies);

// Same, reusing a precomputed contribution table for p.
double ExpectedUtility(const GameSpec& game, std::size_t i, int j,
                       const ContributionTable& q, const Matrix& strategies);

}  // namespace spectrum

#endif  // SPECTRUM_MODEL_H_
