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

// Differential-privacy primitives used by the mediator: Laplace noise, the
// sparse-vector cost search (SparCost), the exponential mechanism, and the
// closed-form accuracy and composition bounds that go with them.

#ifndef SPECTRUM_DP_MECHANISMS_H_
#define SPECTRUM_DP_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spectrum/errors.h"
#include "spectrum/rng.h"

namespace spectrum {

struct PrivacyBudget {
  double epsilon = 0.1;
  double delta = 0.25;
  // Per-round budget of the T-fold composition; see PerRoundEpsilon.
  double epsilon0 = 0.0;
};

// Master seed and the test hook that turns every sampler off.
struct NoiseControl {
  std::uint64_t seed = 0;
  bool enabled = true;

  KeyedStream Stream(StreamTag tag, std::uint32_t user = 0,
                     std::uint32_t channel = 0,
                     std::uint32_t period = 0) const {
    return KeyedStream({seed, tag, user, channel, period});
  }
};

// One draw from Laplace(0, scale), by inversion of the CDF. Returns 0 without
// consuming the stream when noise is disabled. Throws ParameterError for
// scale <= 0.
double SampleLaplace(double scale, const NoiseControl& noise,
                     KeyedStream& stream);

struct SparCostResult {
  // Index of the first cost whose noisy value fell at or below the noisy
  // threshold. Every earlier item was answered with bottom.
  std::optional<std::size_t> accepted;
  // Noisy cost released for the accepted item.
  double noisy_value = 0.0;
  double noisy_threshold = 0.0;

  bool exhausted() const { return !accepted.has_value(); }
};

// Sparse-vector search over `costs` in order. The threshold gets
// Lap(2 * sensitivity / epsilon) once, each cost gets Lap(4 * sensitivity /
// epsilon), and the search halts at the first acceptance. An empty sequence
// is reported as exhausted.
SparCostResult SparCost(std::span<const double> costs, double threshold,
                        double epsilon, double sensitivity,
                        const NoiseControl& noise, KeyedStream& stream);

// e1 = 8 * gamma * (ln N + ln(4 / beta)) / epsilon. With probability at least
// 1 - beta/2 every released value is within e1 of its true cost and every
// bottom answer has true cost >= threshold - e1.
double SparseCostErrorBound(double num_costs, double beta, double epsilon,
                            double gamma);

// E1 = 8 * gamma * (k * ln(n * gamma / alpha) + ln(4 / beta)) / epsilon,
// the worst case over users and channels.
double TotalSparseCostErrorBound(int n, int k, double gamma, double alpha,
                                 double beta, double epsilon);

// Selection probabilities proportional to
// exp(epsilon * score / (2 * sensitivity)), normalized in log space.
std::vector<double> ExponentialWeights(std::span<const double> scores,
                                       double epsilon, double sensitivity);

// Draws one index from ExponentialWeights. With noise disabled the first
// index of maximal score is returned. Throws ParameterError on an empty
// candidate list or a bad parameter.
std::size_t ExponentialSelect(std::span<const double> scores, double epsilon,
                              double sensitivity, const NoiseControl& noise,
                              KeyedStream& stream);

// Candidate-level wrapper around ExponentialSelect.
template <typename Candidate, typename ScoreFn>
const Candidate& ExpSelect(const std::vector<Candidate>& candidates,
                           ScoreFn&& score, double epsilon, double sensitivity,
                           const NoiseControl& noise, KeyedStream& stream) {
  if (candidates.empty()) throw ParameterError("no candidates to select from");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const Candidate& c : candidates) scores.push_back(score(c));
  return candidates[ExponentialSelect(scores, epsilon, sensitivity, noise,
                                      stream)];
}

// 2 * sensitivity * ln(range / beta) / epsilon: with probability >= 1 - beta
// the selected score is within this of the best score.
double ExponentialUtilityBound(double sensitivity, double range_size,
                               double beta, double epsilon);

// Advanced composition: eps * sqrt(2 T ln(1/delta')) + T eps (e^eps - 1).
double ComposeEpsilon(double epsilon, int periods, double delta_prime);

// eps / sqrt(8 T ln(1/delta)). Warns when epsilon > 1, where the T-fold
// guarantee is not claimed.
double PerRoundEpsilon(double epsilon, int periods, double delta);

}  // namespace spectrum

#endif  // SPECTRUM_DP_MECHANISMS_H_
