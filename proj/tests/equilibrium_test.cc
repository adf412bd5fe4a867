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
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "spectrum/errors.h"
#include "spectrum/scenario.h"

namespace spectrum {
namespace {

using ::testing::ElementsAre;

GameSpec TinyGame(std::uint64_t seed, int n = 3, int k = 2, int m = 2) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.n = n;
  spec.k = k;
  spec.m = m;
  spec.alpha = 0.1;
  return GenScenario(spec).game;
}

// Rates exp(u) for each action on every channel, for a single user.
GameSpec GameWithLogRates(const std::vector<double>& u) {
  GameSpec game;
  game.n = 1;
  game.m = static_cast<int>(u.size());
  game.k = 1;
  game.gamma = 1.0;
  game.alpha = 1.0;
  const double b = 1e3;
  const double w = 1e-13;
  game.radio = RadioParams::Constant(1, game.m, 1, b, 1.0, 1.0, w);
  game.actions.resize(1);
  for (int j = 0; j < game.m; ++j) {
    game.radio.tx_power_w[j] = w * std::expm1(std::log(2.0) * std::exp(u[j]) / b);
    game.actions[0].push_back({j, 0.5});
  }
  game.played_action = {0};
  return game;
}

TEST(GridTest, ThreePointExample) {
  const AggregatorGrid g = BuildGrid(10, 0.1, 0.5);
  EXPECT_THAT(g.values, ElementsAre(0.0, 0.5, 1.0));
}

TEST(GridTest, UnitGridHasNPlusOnePoints) {
  for (int n : {1, 7, 200, 1000}) {
    const AggregatorGrid g = BuildGrid(n, 1.0 / n, 1.0 / n);
    ASSERT_EQ(g.size(), static_cast<std::size_t>(n) + 1);
    EXPECT_EQ(g.values.front(), 0.0);
    EXPECT_EQ(g.values.back(), 1.0);
    for (std::size_t j = 1; j < g.size(); ++j) {
      EXPECT_NEAR(g.values[j] - g.values[j - 1], 1.0 / n, 1e-12);
    }
  }
}

TEST(GridTest, SizeMatchesCostCount) {
  const AggregatorGrid g = BuildGrid(3, 1.0 / 3, 0.1);
  EXPECT_EQ(g.size(), 11u);
  EXPECT_NEAR(g.values.back(), 1.0, 1e-12);
}

TEST(GridTest, RejectsBadAlpha) {
  EXPECT_THROW(BuildGrid(10, 0.1, 0.0), ParameterError);
  EXPECT_THROW(BuildGrid(10, 0.1, 1.5), ParameterError);
}

TEST(ZetaTest, Example) {
  EXPECT_NEAR(ZetaBound(1000, 50, 0.001), 0.3034854258770293, 1e-15);
}

TEST(ZetaTest, LinearInGammaAndDecreasingWithUnitGamma) {
  EXPECT_NEAR(ZetaBound(50, 4, 0.3), 3 * ZetaBound(50, 4, 0.1), 1e-14);
  for (int n = 500; n < 2000; n += 100) {
    EXPECT_GT(ZetaBound(n, 50, 1.0 / n), ZetaBound(n + 100, 50, 1.0 / (n + 100)));
  }
}

TEST(CandidateCostTest, AbsoluteGap) {
  EXPECT_EQ(CandidateCost(0.3, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(CandidateCost(0.1, 0.4), CandidateCost(0.7, 0.4));
}

TEST(CandidateCostTest, TableFormMatchesOracle) {
  const GameSpec game = TinyGame(4);
  const ContentionProfile p = game.Contention();
  const ContributionTable q(p);
  Matrix s(3, 2);
  s(0, 0) = 0.2, s(0, 1) = 0.8, s(1, 0) = 0.6, s(1, 1) = 0.4, s(2, 0) = 1,
  s(2, 1) = 0;
  for (int i = 0; i < 3; ++i) {
    for (int d = 0; d < 2; ++d) {
      double agg = 0.0;
      for (int l = 0; l < 3; ++l) agg += QContribution(i, l, p) * s(l, d);
      agg *= game.gamma;
      EXPECT_NEAR(CandidateCost(0.25, i, d, q, s, game.gamma),
                  std::abs(agg - 0.25), 1e-15);
    }
  }
}

TEST(SelectTargetsTest, NoiseFreeTakesFirstGridValueUnderThreshold) {
  const GameSpec game = TinyGame(5);
  const ContentionProfile p = game.Contention();
  const Matrix s = Matrix::Uniform(3, 2);
  const AggregatorGrid grid = BuildGrid(3, game.gamma, 0.1);
  const double threshold = 0.15;
  const SetValuedTarget t = SelectTargets(grid, p, s, game.gamma, threshold,
                                          0.1, {0, false});
  EXPECT_EQ(t.fallback_count, 0);
  const ContributionTable q(p);
  for (int i = 0; i < 3; ++i) {
    for (int d = 0; d < 2; ++d) {
      const double actual = q.Weighted(i, s.Column(d), game.gamma);
      std::size_t first = 0;
      while (std::abs(actual - grid.values[first]) > threshold) ++first;
      EXPECT_EQ(t.target(i, d), grid.values[first]);
    }
  }
}

TEST(SelectTargetsTest, NoiseFreeFallbackToArgmin) {
  const GameSpec game = TinyGame(5);
  const AggregatorGrid grid = BuildGrid(3, game.gamma, 0.1);
  int warnings = 0;
  WarningSink previous = SetWarningSink([&](const std::string&) { ++warnings; });
  const SetValuedTarget t = SelectTargets(grid, game.Contention(),
                                          Matrix::Uniform(3, 2), game.gamma,
                                          -1.0, 0.1, {0, false});
  SetWarningSink(previous);
  EXPECT_EQ(t.fallback_count, 6);
  EXPECT_EQ(warnings, 1);
  const ContributionTable q(game.Contention());
  for (int i = 0; i < 3; ++i) {
    for (int d = 0; d < 2; ++d) {
      const double actual = q.Weighted(i, Matrix::Uniform(3, 2).Column(d),
                                       game.gamma);
      double best = 1e9;
      for (double g : grid.values) best = std::min(best, std::abs(actual - g));
      EXPECT_NEAR(std::abs(actual - t.target(i, d)), best, 1e-15);
    }
  }
}

TEST(SelectTargetsTest, AccuracyEventOnCoarseGrid) {
  const GameSpec game = TinyGame(6);
  const AggregatorGrid grid = BuildGrid(3, game.gamma, 0.1);
  const ContributionTable q(game.Contention());
  const Matrix s = Matrix::Uniform(3, 2);
  const double eps = 0.1;
  const double beta = 0.25;
  const double e1 = SparseCostErrorBound(grid.size(), beta, eps, game.gamma);
  const double threshold = 0.2;
  WarningSink previous = SetWarningSink([](const std::string&) {});
  int good = 0;
  const int trials = 400;
  for (int seed = 0; seed < trials; ++seed) {
    const SetValuedTarget t = SelectTargets(grid, game.Contention(), s,
                                            game.gamma, threshold, eps,
                                            {static_cast<std::uint64_t>(seed)});
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      for (int d = 0; d < 2; ++d) {
        if (t.fallback[i * 2 + d]) continue;
        const double actual = q.Weighted(i, s.Column(d), game.gamma);
        ok &= std::abs(actual - t.target(i, d)) <= threshold + e1;
      }
    }
    good += ok;
  }
  SetWarningSink(previous);
  EXPECT_GE(good, (1 - beta / 2) * trials);
}

TEST(BestResponseSetTest, HandBuiltUtilities) {
  const GameSpec game = GameWithLogRates({10.0, 9.5, 8.0});
  EXPECT_THAT(BestResponseSet(game, 0, 0, 0.0, 0.6), ElementsAre(0, 1));
  EXPECT_THAT(BestResponseSet(game, 0, 0, 0.0, 0.0), ElementsAre(0));
  EXPECT_THAT(BestResponseSet(game, 0, 0, 0.3, 5.0), ElementsAre(0, 1, 2));
}

TEST(BestResponseSetTest, ZeroSlackKeepsTies) {
  const GameSpec game = GameWithLogRates({9.0, 9.0, 8.0});
  EXPECT_THAT(BestResponseSet(game, 0, 0, 0.0, 0.0), ElementsAre(0, 1));
}

TEST(BestResponseSetTest, MonotoneInSlack) {
  const GameSpec game = GameWithLogRates({7.0, 7.4, 6.1, 7.9, 5.0});
  std::vector<int> previous;
  for (double xi : {0.0, 0.2, 0.5, 0.9, 1.5, 3.0}) {
    const std::vector<int> set = BestResponseSet(game, 0, 0, 0.0, xi);
    EXPECT_TRUE(std::includes(set.begin(), set.end(), previous.begin(),
                              previous.end()));
    previous = set;
  }
}

TEST(BestResponseSetTest, NegativeSlackRejected) {
  const GameSpec game = GameWithLogRates({1.0});
  EXPECT_THROW(BestResponseSet(game, 0, 0, 0.0, -0.1), ParameterError);
}

double Residual(int n, int k, double g, double b, double e, double d,
                const E2Solution& s) {
  const double rhs = 32 * std::sqrt(2.0) * n * g * g *
                     std::log(2 * k * s.periods / b) *
                     std::sqrt(std::log(k) * std::log(1 / d)) / e;
  return std::abs(s.e2 * s.e2 - rhs) / rhs;
}

TEST(SolveE2Test, GoldenValues) {
  struct Case {
    int n, k;
    double e2, periods;
  };
  for (const Case& c : {Case{1000, 15, 2.437256234500943, 7.294143676760302},
                        Case{200, 15, 4.86258821154801, 1.8324903985821963},
                        Case{3, 2, 9.694417978843035, 0.11800542206427146},
                        Case{5, 3, 11.436795860970362, 0.13438651652235903}}) {
    const E2Solution s = SolveE2(c.n, c.k, 1.0 / c.n, 0.25, 0.1, 0.25);
    EXPECT_NEAR(s.e2, c.e2, 1e-9 * c.e2) << c.n;
    EXPECT_NEAR(s.periods, c.periods, 1e-8 * c.periods) << c.n;
    EXPECT_LT(Residual(c.n, c.k, 1.0 / c.n, 0.25, 0.1, 0.25, s), 1e-9);
  }
}

TEST(SolveE2Test, DecreasingInUsersAndEpsilon) {
  for (int n = 500; n < 2000; n += 100) {
    EXPECT_GT(SolveE2(n, 15, 1.0 / n, 0.25, 0.1, 0.25).e2,
              SolveE2(n + 100, 15, 1.0 / (n + 100), 0.25, 0.1, 0.25).e2);
  }
  EXPECT_GT(SolveE2(1000, 15, 1e-3, 0.25, 0.05, 0.25).e2,
            SolveE2(1000, 15, 1e-3, 0.25, 0.1, 0.25).e2);
  EXPECT_GT(SolveE2(1000, 15, 1e-3, 0.25, 0.1, 0.25).e2,
            SolveE2(1000, 15, 1e-3, 0.25, 0.2, 0.25).e2);
}

TEST(SolveE2Test, SingleChannelIsDegenerate) {
  const E2Solution s = SolveE2(100, 1, 0.01, 0.25, 0.1, 0.25);
  EXPECT_EQ(s.e2, 0.0);
  EXPECT_EQ(PrescribedPeriods(s), 1);
}

TEST(SolveE2Test, PrescribedPeriodsRoundsUp) {
  EXPECT_EQ(PrescribedPeriods({1.0, 7.29, 1}), 8);
  EXPECT_EQ(PrescribedPeriods({1.0, 0.12, 1}), 1);
  EXPECT_EQ(PrescribedPeriods({1.0, 3.0, 1}), 3);
}

TEST(SolveE2Test, ForcedHorizonInvertsHorizonFormula) {
  const int n = 1000;
  const double g = 1e-3;
  const double e2 = E2ForPeriods(n, 15, g, 20);
  EXPECT_NEAR(16.0 * n * n * g * g * std::log(15.0) / (e2 * e2), 20.0, 1e-12);
}

TEST(EtaBudgetTest, DefaultParameterGolden) {
  const ApproximationBudget b =
      EtaBudget(1000, 50, 15, 1e-3, 1e-3, 0.25, 0.1, 0.25);
  EXPECT_NEAR(b.zeta, 0.3034854258770293, 1e-14);
  EXPECT_EQ(b.alpha, 1e-3);
  EXPECT_NEAR(b.e1, 8.511113432557746, 1e-11);
  EXPECT_NEAR(b.e2, 2.437256234500943, 1e-9);
  EXPECT_NEAR(b.eta, 11.252855092935718, 1e-9);
  EXPECT_EQ(b.periods, 8);
  EXPECT_EQ(b.eta, b.zeta + b.alpha + b.e1 + b.e2);
  EXPECT_EQ(b.xi, 1e-3 + 2e-3 + b.zeta);
}

TEST(EtaBudgetTest, ShrinksWithUsers) {
  const ApproximationBudget small =
      EtaBudget(500, 50, 15, 1.0 / 500, 1.0 / 500, 0.25, 0.1, 0.25);
  const ApproximationBudget large =
      EtaBudget(2000, 50, 15, 1.0 / 2000, 1.0 / 2000, 0.25, 0.1, 0.25);
  EXPECT_LT(large.eta, small.eta);
  EXPECT_GT(large.eta, 0.0);
}

TEST(EtaBudgetTest, OverrideFlagsHorizon) {
  const ApproximationBudget b =
      EtaBudget(1000, 50, 15, 1e-3, 1e-3, 0.25, 0.1, 0.25, 30);
  EXPECT_TRUE(b.periods_overridden);
  EXPECT_EQ(b.periods, 30);
  EXPECT_EQ(b.e2, E2ForPeriods(1000, 15, 1e-3, 30));
}

// Independent brute force: full expected utility with user i's row replaced.
double OracleUtility(const GameSpec& game, std::size_t i, int j,
                     const Matrix& s) {
  std::vector<double> p(game.n);
  for (int l = 0; l < game.n; ++l) {
    p[l] = game.actions[l][static_cast<std::size_t>(l) == i
                               ? j
                               : game.played_action[l]]
               .contention_prob;
  }
  double denom = std::log(p[i]);
  for (int l = 0; l < game.n; ++l) {
    if (static_cast<std::size_t>(l) != i) denom += std::log(1 - p[l]);
  }
  double total = 0.0;
  for (int d = 0; d < game.k; ++d) {
    if (s(i, d) == 0.0) continue;
    double agg = 0.0;
    for (int l = 0; l < game.n; ++l) {
      const double num = static_cast<std::size_t>(l) == i ? std::log(p[l])
                                                          : std::log(1 - p[l]);
      agg += num / denom * s(l, d);
    }
    const double rate =
        game.radio.bandwidth(i, d) *
        std::log2(1 + game.radio.power(i, game.actions[i][j].index, d) *
                          game.radio.gain(i, d) / game.radio.noise(i, d));
    total += s(i, d) * (std::log(rate) + game.gamma * agg);
  }
  return total;
}

TEST(MeasureRegretTest, AgreesWithEnumerationOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GameSpec game = TinyGame(seed);
    Matrix s(3, 2);
    for (int i = 0; i < 3; ++i) {
      s(i, 0) = 0.1 + 0.35 * i;
      s(i, 1) = 1 - s(i, 0);
    }
    const RegretReport report = MeasureRegret(game, s);
    for (int i = 0; i < 3; ++i) {
      const double current = OracleUtility(game, i, game.played_action[i], s);
      double best = current;
      for (int j = 0; j < game.m; ++j) {
        for (int d = 0; d < game.k; ++d) {
          Matrix dev = s;
          for (int c = 0; c < game.k; ++c) dev(i, c) = c == d;
          best = std::max(best, OracleUtility(game, i, j, dev));
        }
      }
      EXPECT_NEAR(report.per_user[i], best - current, 1e-12);
    }
  }
}

TEST(MeasureRegretTest, SingleUserIsBestMinusCurrent) {
  GameSpec game = TinyGame(9, 1, 3, 2);
  Matrix s(1, 3);
  s(0, 0) = 0.2, s(0, 1) = 0.5, s(0, 2) = 0.3;
  const RegretReport r = MeasureRegret(game, s);
  double best = -1e300;
  for (int j = 0; j < 2; ++j) {
    for (int d = 0; d < 3; ++d) {
      Matrix dev(1, 3, 0.0);
      dev(0, d) = 1.0;
      best = std::max(best, OracleUtility(game, 0, j, dev));
    }
  }
  EXPECT_NEAR(r.max, best - OracleUtility(game, 0, game.played_action[0], s),
              1e-12);
}

TEST(MeasureRegretTest, ZeroAtUniqueArgmax) {
  GameSpec game = TinyGame(10, 1, 2, 2);
  game.radio.channel_gain = {1.0, 0.5};
  game.radio.tx_power_w = {0.1, 0.1, 0.05, 0.05};
  game.actions[0] = {{0, 0.5}, {1, 0.5}};
  game.played_action = {0};
  Matrix s(1, 2, 0.0);
  s(0, 0) = 1.0;
  EXPECT_EQ(MeasureRegret(game, s).max, 0.0);
}

TEST(MeasureRegretTest, RefusesHugeInstances) {
  GameSpec game;
  game.n = 2000;
  game.m = 50;
  game.k = 15;
  EXPECT_THROW(MeasureRegret(game, Matrix(2000, 15)), SizeError);
}

TEST(MeasureRegretTest, MixedDeviationsNeverBeatPure) {
  const GameSpec game = TinyGame(12, 3, 3, 2);
  const Matrix s = Matrix::Uniform(3, 3);
  const RegretReport r = MeasureRegret(game, s);
  for (int i = 0; i < 3; ++i) {
    const double current = OracleUtility(game, i, game.played_action[i], s);
    for (int a = 0; a <= 10; ++a) {
      for (int b = 0; a + b <= 10; ++b) {
        Matrix dev = s;
        dev(i, 0) = a / 10.0, dev(i, 1) = b / 10.0,
        dev(i, 2) = (10 - a - b) / 10.0;
        for (int j = 0; j < game.m; ++j) {
          EXPECT_LE(OracleUtility(game, i, j, dev) - current,
                    r.per_user[i] + 1e-12);
        }
      }
    }
  }
}

TEST(PureRegretTest, AggregativeBoundsOnEveryProfile) {
  const GameSpec game = TinyGame(13);
  const std::vector<PureProfile> profiles = EnumeratePureProfiles(game);
  ASSERT_EQ(profiles.size(), 64u);
  for (const PureProfile& profile : profiles) {
    const PureRegrets r = MeasurePureRegrets(game, profile);
    double max_std = 0.0;
    double max_agg = 0.0;
    for (int i = 0; i < 3; ++i) {
      EXPECT_GE(r.standard[i], 0.0);
      EXPECT_GE(r.aggregative[i], 0.0);
      EXPECT_LE(r.aggregative[i], r.standard[i] + game.gamma + 1e-12);
      max_std = std::max(max_std, r.standard[i]);
      max_agg = std::max(max_agg, r.aggregative[i]);
    }
    EXPECT_LE(max_std, max_agg + game.gamma + 1e-12);
  }
}

TEST(AggregativeRegretTest, PerturbationMovesRegretByAtMostTwoAlpha) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GameSpec game = TinyGame(seed);
    const Matrix s = Matrix::Uniform(3, 2);
    const ContributionTable q(game.Contention());
    for (int i = 0; i < 3; ++i) {
      std::vector<double> agg(2);
      for (int d = 0; d < 2; ++d) agg[d] = q.Weighted(i, s.Column(d), game.gamma);
      std::vector<double> moved = agg;
      moved[0] += game.alpha * ((seed % 3) - 1.0);
      moved[1] -= game.alpha * 0.7;
      EXPECT_LE(std::abs(AggregativeRegretAt(game, i, s, agg) -
                         AggregativeRegretAt(game, i, s, moved)),
                2 * game.alpha + 1e-12);
    }
  }
}

TEST(EnumerateTest, RefusesLargeGames) {
  GameSpec game;
  game.n = 5;
  game.m = 50;
  game.k = 15;
  EXPECT_THROW(EnumeratePureProfiles(game), SizeError);
}

}  // namespace
}  // namespace spectrum
