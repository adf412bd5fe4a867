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

#include "spectrum/dp_mechanisms.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace spectrum {
namespace {

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive");
  }
}

void RequireProbability(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ParameterError(std::string(name) + " must lie in (0, 1)");
  }
}

}  // namespace

double SampleLaplace(double scale, const NoiseControl& noise,
                     KeyedStream& stream) {
  RequirePositive(scale, "Laplace scale");
  if (!noise.enabled) return 0.0;
  const double u = stream.NextOpenUniform() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

SparCostResult SparCost(std::span<const double> costs, double threshold,
                        double epsilon, double sensitivity,
                        const NoiseControl& noise, KeyedStream& stream) {
  RequirePositive(epsilon, "epsilon");
  RequirePositive(sensitivity, "sensitivity");
  SparCostResult result;
  result.noisy_threshold =
      threshold + SampleLaplace(2.0 * sensitivity / epsilon, noise, stream);
  const double item_scale = 4.0 * sensitivity / epsilon;
  for (std::size_t n = 0; n < costs.size(); ++n) {
    const double noisy = costs[n] + SampleLaplace(item_scale, noise, stream);
    if (noisy <= result.noisy_threshold) {
      result.accepted = n;
      result.noisy_value = noisy;
      return result;
    }
  }
  return result;
}

double SparseCostErrorBound(double num_costs, double beta, double epsilon,
                            double gamma) {
  RequirePositive(num_costs, "N");
  RequireProbability(beta, "beta");
  RequirePositive(epsilon, "epsilon");
  RequirePositive(gamma, "gamma");
  return 8.0 * gamma * (std::log(num_costs) + std::log(4.0 / beta)) / epsilon;
}

double TotalSparseCostErrorBound(int n, int k, double gamma, double alpha,
                                 double beta, double epsilon) {
  if (n <= 0 || k < 0) throw ParameterError("n must be positive, k >= 0");
  RequirePositive(gamma, "gamma");
  RequirePositive(alpha, "alpha");
  RequireProbability(beta, "beta");
  RequirePositive(epsilon, "epsilon");
  if (alpha > n * gamma * (1.0 + 1e-12)) {
    throw ParameterError("alpha must not exceed n * gamma");
  }
  const double grid_span = std::log(n * gamma / alpha);
  return 8.0 * gamma * (k * grid_span + std::log(4.0 / beta)) / epsilon;
}

std::vector<double> ExponentialWeights(std::span<const double> scores,
                                       double epsilon, double sensitivity) {
  if (scores.empty()) throw ParameterError("no candidates to select from");
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  RequirePositive(sensitivity, "sensitivity");
  const double scale = epsilon / (2.0 * sensitivity);
  std::vector<double> weights(scores.size());
  double top = -INFINITY;
  for (std::size_t r = 0; r < scores.size(); ++r) {
    weights[r] = scale * scores[r];
    top = std::max(top, weights[r]);
  }
  double total = 0.0;
  for (double& w : weights) {
    w = std::exp(w - top);
    total += w;
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::size_t ExponentialSelect(std::span<const double> scores, double epsilon,
                              double sensitivity, const NoiseControl& noise,
                              KeyedStream& stream) {
  const std::vector<double> weights =
      ExponentialWeights(scores, epsilon, sensitivity);
  if (!noise.enabled) {
    return static_cast<std::size_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
  }
  const double u = stream.NextOpenUniform();
  double cumulative = 0.0;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    cumulative += weights[r];
    if (u < cumulative) return r;
  }
  // Rounding left the cumulative sum just below u; take the last candidate
  // with nonzero weight.
  for (std::size_t r = weights.size(); r-- > 0;) {
    if (weights[r] > 0.0) return r;
  }
  return weights.size() - 1;
}

double ExponentialUtilityBound(double sensitivity, double range_size,
                               double beta, double epsilon) {
  RequirePositive(sensitivity, "sensitivity");
  RequirePositive(range_size, "range size");
  RequireProbability(beta, "beta");
  RequirePositive(epsilon, "epsilon");
  return 2.0 * sensitivity * std::log(range_size / beta) / epsilon;
}

double ComposeEpsilon(double epsilon, int periods, double delta_prime) {
  RequirePositive(epsilon, "epsilon");
  if (periods <= 0) throw ParameterError("periods must be positive");
  RequireProbability(delta_prime, "delta'");
  const double t = periods;
  return epsilon * std::sqrt(2.0 * t * std::log(1.0 / delta_prime)) +
         t * epsilon * std::expm1(epsilon);
}

double PerRoundEpsilon(double epsilon, int periods, double delta) {
  RequirePositive(epsilon, "epsilon");
  if (periods <= 0) throw ParameterError("periods must be positive");
  RequireProbability(delta, "delta");
  if (epsilon > 1.0) {
    Warn("per-round budget requested for epsilon = " +
         std::to_string(epsilon) + " > 1; the T-fold guarantee assumes <= 1");
  }
  return epsilon / std::sqrt(8.0 * periods * std::log(1.0 / delta));
}

}  // namespace spectrum
