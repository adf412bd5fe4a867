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

#include "spectrum/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spectrum/equilibrium.h"
#include "spectrum/learning.h"
#include "spectrum/mediator.h"
#include "spectrum/rng.h"
#include "spectrum/scenario.h"

namespace spectrum {
namespace {

constexpr int kTrials = 50;

ScenarioSpec TinySpec(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.n = 3;
  spec.k = 2;
  spec.m = 2;
  spec.alpha = 0.1;
  return spec;
}

std::vector<Report> AllOptIn(const Scenario& s) {
  return CollectReports(s.submitted.probabilities,
                        std::vector<bool>(s.game.n, true));
}

EpochResult TinyEpoch(const Scenario& s, const std::vector<Report>& reports,
                      std::uint64_t seed) {
  return RunEpoch(s.game, reports, {0.1, 0.25, 0.0}, 0.25, {seed, true});
}

CheckResult Check(const std::string& name,
                  const std::function<std::string()>& body) {
  CheckResult r;
  r.name = name;
  try {
    r.detail = body();
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

std::string ContributionsNormalized(std::uint64_t seed) {
  for (int trial = 0; trial < kTrials; ++trial) {
    KeyedStream stream({seed, StreamTag::kTest, 1,
                        static_cast<std::uint32_t>(trial), 0});
    std::vector<double> p(7);
    for (double& v : p) v = 0.01 + 0.98 * stream.NextOpenUniform();
    const ContributionTable q{ContentionProfile(p)};
    for (std::size_t i = 0; i < p.size(); ++i) {
      double sum = 0.0;
      for (std::size_t l = 0; l < p.size(); ++l) {
        if (q(i, l) < 0.0 || q(i, l) > 1.0) return "contribution outside [0,1]";
        sum += q(i, l);
      }
      if (std::abs(sum - 1.0) > kIdentityTolerance) {
        return "contributions do not sum to 1";
      }
    }
  }
  return "";
}

std::string GridShape() {
  for (int n : {3, 10, 200, 1000}) {
    const AggregatorGrid g = BuildGrid(n, 1.0 / n, 1.0 / n);
    if (g.size() != static_cast<std::size_t>(n) + 1) return "wrong grid size";
    if (g.values.front() != 0.0 || std::abs(g.values.back() - 1.0) > 1e-12) {
      return "grid endpoints wrong";
    }
    for (std::size_t j = 1; j < g.size(); ++j) {
      if (std::abs(g.values[j] - g.values[j - 1] - g.alpha) > 1e-12) {
        return "grid not evenly spaced";
      }
    }
  }
  return "";
}

std::string BudgetIdentity() {
  for (int n : {3, 5, 200, 1000, 2000}) {
    for (int k : {2, 3, 15}) {
      const double g = 1.0 / n;
      const ApproximationBudget b = EtaBudget(n, 50, k, g, g, 0.25, 0.1, 0.25);
      if (b.eta != b.zeta + b.alpha + b.e1 + b.e2) return "eta identity";
      if (b.xi != g + 2.0 * g + b.zeta) return "xi identity";
      if (!(b.eta > 0.0)) return "eta not positive";
      const E2Solution s = SolveE2(n, k, g, 0.25, 0.1, 0.25);
      const double rhs = 32.0 * std::sqrt(2.0) * n * g * g *
                         std::log(2.0 * k * s.periods / 0.25) *
                         std::sqrt(std::log(k) * std::log(4.0)) / 0.1;
      if (std::abs(s.e2 * s.e2 - rhs) > 1e-9 * rhs) return "E2 residual";
    }
  }
  return "";
}

std::string ProjectionFeasible(std::uint64_t seed) {
  for (int trial = 0; trial < kTrials; ++trial) {
    KeyedStream stream({seed, StreamTag::kTest, 2,
                        static_cast<std::uint32_t>(trial), 0});
    ConstraintSet cset = ConstraintSet::Full(6);
    std::vector<double> w(6);
    for (int d = 0; d < 6; ++d) {
      w[d] = stream.NextOpenUniform();
      cset.allowed[d] = stream.NextOpenUniform() < 0.6;
      cset.caps[d] = 0.3 + 0.7 * stream.NextOpenUniform();
    }
    cset.allowed[trial % 6] = true;
    double caps = 0.0;
    for (int d = 0; d < 6; ++d) caps += cset.allowed[d] ? cset.caps[d] : 0.0;
    if (caps < 1.0) continue;
    if (!cset.Contains(KlProject(w, cset))) return "projection infeasible";
  }
  return "";
}

std::string UniformLossInvariance() {
  const ConstraintSet cset = ConstraintSet::Full(4);
  const std::vector<double> row = {0.1, 0.2, 0.3, 0.4};
  for (double loss : {0.0, 0.3, 1.0}) {
    const std::vector<double> next =
        KlProject(MwUpdate(row, std::vector<double>(4, loss), 1.7), cset);
    for (int d = 0; d < 4; ++d) {
      if (std::abs(next[d] - row[d]) > 1e-12) return "row moved";
    }
  }
  return "";
}

std::string BestResponseMonotone(std::uint64_t seed) {
  ScenarioSpec spec = TinySpec(seed);
  spec.m = 6;
  spec.n = 4;
  // Distinct powers per action so that the sets differ across xi.
  Scenario s = GenScenario(spec);
  for (int a = 0; a < spec.m; ++a) {
    for (int i = 0; i < spec.n; ++i) {
      for (int d = 0; d < spec.k; ++d) {
        s.game.radio.tx_power_w[(i * spec.m + a) * spec.k + d] =
            0.01 * (a + 1);
      }
    }
  }
  double previous_size = 0;
  for (double xi : {0.0, 0.01, 0.05, 0.2, 1.0}) {
    const auto set = BestResponseSet(s.game, 0, 0, 0.1, xi);
    if (set.size() < previous_size) return "set shrank as xi grew";
    previous_size = static_cast<double>(set.size());
  }
  return "";
}

std::string AggregativeBoundSuite(std::uint64_t seed) {
  const Scenario s = GenScenario(TinySpec(seed));
  const double gamma = s.game.gamma;
  for (const PureProfile& profile : EnumeratePureProfiles(s.game)) {
    const PureRegrets r = MeasurePureRegrets(s.game, profile);
    double max_std = 0.0;
    double max_agg = 0.0;
    for (int i = 0; i < s.game.n; ++i) {
      if (r.aggregative[i] > r.standard[i] + gamma + 1e-12) return "best response not an aggregative best response";
      max_std = std::max(max_std, r.standard[i]);
      max_agg = std::max(max_agg, r.aggregative[i]);
    }
    if (max_std > max_agg + gamma + 1e-12) return "aggregative best responses not an equilibrium";
  }
  return "";
}

std::string EpochDeterminism(std::uint64_t seed) {
  const Scenario s = GenScenario(TinySpec(seed));
  const std::vector<Report> reports = AllOptIn(s);
  const EpochResult a = TinyEpoch(s, reports, seed);
  const EpochResult b = TinyEpoch(s, reports, seed);
  if (!(a.suggestions.rows == b.suggestions.rows)) return "suggestions differ";
  for (int t = 0; t < a.learner.trajectory.periods(); ++t) {
    if (!(a.learner.trajectory.published[t] ==
          b.learner.trajectory.published[t])) {
      return "published aggregators differ";
    }
  }
  return "";
}

std::string OptOutInvariance(std::uint64_t seed) {
  const Scenario s = GenScenario(TinySpec(seed));
  std::vector<bool> opt_in = {false, true, true};
  const EpochResult a = TinyEpoch(
      s, CollectReports(s.submitted.probabilities, opt_in), seed);
  Matrix altered = s.submitted.probabilities;
  altered(1, 0) = 1.0;
  altered(1, 1) = 0.0;
  altered(2, 0) = 0.0;
  altered(2, 1) = 1.0;
  const EpochResult b =
      TinyEpoch(s, CollectReports(altered, opt_in), seed);
  const auto ra = a.suggestions.rows.row(0);
  const auto rb = b.suggestions.rows.row(0);
  if (!std::equal(ra.begin(), ra.end(), rb.begin())) return "opt-out suggestion changed";
  return "";
}

std::string BillboardReplay(std::uint64_t seed) {
  const Scenario s = GenScenario(TinySpec(seed));
  const EpochResult e = TinyEpoch(s, AllOptIn(s), seed);
  for (int i = 0; i < s.game.n; ++i) {
    const std::vector<double> row = RecomputeSuggestionRow(
        s.game, i, e.targets, e.budget.xi,
        PublishedRows(e.learner.trajectory, i), e.params);
    const auto issued = e.suggestions.rows.row(i);
    if (!std::equal(row.begin(), row.end(), issued.begin())) {
      return "row of user " + std::to_string(i) + " not reproduced";
    }
  }
  return "";
}

}  // namespace

std::vector<CheckResult> RunPropertySuites(std::uint64_t seed) {
  return {
      Check("contributions-normalized",
            [&] { return ContributionsNormalized(seed); }),
      Check("grid-shape", GridShape),
      Check("budget-identity", BudgetIdentity),
      Check("projection-feasible", [&] { return ProjectionFeasible(seed); }),
      Check("uniform-loss-invariance", UniformLossInvariance),
      Check("best-response-monotone",
            [&] { return BestResponseMonotone(seed); }),
      Check("aggregative-bounds", [&] { return AggregativeBoundSuite(seed); }),
      Check("epoch-determinism", [&] { return EpochDeterminism(seed); }),
      Check("opt-out-invariance", [&] { return OptOutInvariance(seed); }),
      Check("billboard-replay", [&] { return BillboardReplay(seed); }),
  };
}

}  // namespace spectrum
