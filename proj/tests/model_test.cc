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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "spectrum/errors.h"
#include "spectrum/rng.h"

namespace spectrum {
namespace {

RadioParams OneUser(double gain) {
  return RadioParams::Constant(1, 1, 1, 20e6, 0.1, gain, 1e-13);
}

GameSpec TwoChannelGame() {
  GameSpec game;
  game.n = 3;
  game.m = 2;
  game.k = 2;
  game.gamma = 1.0 / 3;
  game.alpha = 0.1;
  game.radio = RadioParams::Constant(3, 2, 2, 20e6, 0.1, 1.0, 1e-13);
  for (int i = 0; i < 3; ++i) {
    game.radio.channel_gain[i * 2 + 1] = 0.25 * (i + 1);
  }
  game.actions = {{{0, 0.1}, {1, 0.6}}, {{0, 0.5}, {1, 0.3}},
                  {{0, 0.9}, {1, 0.2}}};
  game.played_action = {0, 0, 0};
  return game;
}

TEST(ShannonRateTest, MatchesHandValue) {
  EXPECT_NEAR(ShannonRate(OneUser(1.0), 0, 0, 0), 797262742.7729958, 1e-3);
}

TEST(ShannonRateTest, ZeroGainGivesZeroRate) {
  EXPECT_EQ(ShannonRate(OneUser(0.0), 0, 0, 0), 0.0);
}

TEST(ShannonRateTest, RejectsNonPositiveBandwidth) {
  RadioParams radio = OneUser(1.0);
  radio.bandwidth_hz[0] = 0.0;
  EXPECT_THROW(ShannonRate(radio, 0, 0, 0), ParameterError);
}

TEST(PureThroughputTest, TwoUsers) {
  const ContentionProfile p({0.5, 0.5});
  EXPECT_DOUBLE_EQ(PureThroughput(8.0, 0, p), 2.0);
}

TEST(PureThroughputTest, VanishesAsRivalAlwaysContends) {
  const ContentionProfile p({0.5, 0.999999});
  EXPECT_LT(PureThroughput(8.0, 0, p), 1e-5);
}

TEST(PureThroughputTest, MaskSkipsNonContenders) {
  const ContentionProfile p({0.5, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(PureThroughput(8.0, 0, p, {true, false, true}), 2.0);
}

TEST(ContentionProfileTest, RejectsBoundaryValues) {
  EXPECT_THROW(ContentionProfile({0.0, 0.5}), ParameterError);
  EXPECT_THROW(ContentionProfile({1.0, 0.5}), ParameterError);
}

TEST(ContentionProfileTest, ClampsNearBoundary) {
  const ContentionProfile p({1e-9, 1 - 1e-9});
  EXPECT_EQ(p[0], kMinContentionProb);
  EXPECT_EQ(p[1], 1 - kMinContentionProb);
}

TEST(QContributionTest, SymmetricPair) {
  const ContentionProfile p({0.5, 0.5});
  EXPECT_DOUBLE_EQ(QContribution(0, 0, p), 0.5);
  EXPECT_DOUBLE_EQ(QContribution(0, 1, p), 0.5);
}

TEST(QContributionTest, ThreeUserOracle) {
  const ContentionProfile p({0.1, 0.5, 0.9});
  const double expected[3][3] = {
      {0.4345879896760935, 0.13082402064781276, 0.43458798967609363},
      {0.03397528639722032, 0.22351707210157923, 0.7425076415012004},
      {0.11656623639766565, 0.7668675272046687, 0.11656623639766565}};
  const ContributionTable table(p);
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      EXPECT_NEAR(QContribution(i, l, p), expected[i][l], 1e-14);
      EXPECT_NEAR(table(i, l), expected[i][l], 1e-14);
    }
  }
}

TEST(QContributionTest, RowsSumToOneOnRandomProfiles) {
  for (std::uint32_t trial = 0; trial < 200; ++trial) {
    KeyedStream stream({7, StreamTag::kTest, trial, 0, 0});
    std::vector<double> values(2 + trial % 9);
    for (double& v : values) v = 0.001 + 0.998 * stream.NextOpenUniform();
    const ContributionTable table{ContentionProfile(values)};
    for (std::size_t i = 0; i < values.size(); ++i) {
      double sum = 0.0;
      for (std::size_t l = 0; l < values.size(); ++l) {
        ASSERT_GE(table(i, l), 0.0);
        ASSERT_LE(table(i, l), 1.0);
        sum += table(i, l);
      }
      ASSERT_NEAR(sum, 1.0, kIdentityTolerance);
    }
  }
}

TEST(AggregatorTest, PureEveryoneIsGamma) {
  const ContentionProfile p({0.2, 0.4, 0.7, 0.9});
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(AggregatorPure(i, p, 0.3), 0.3, 1e-15);
}

TEST(AggregatorTest, PureNobodyIsZero) {
  const ContentionProfile p({0.2, 0.4, 0.7});
  EXPECT_EQ(AggregatorPure(1, p, 0.3, {false, false, false}), 0.0);
}

TEST(AggregatorTest, PureSubsetMatchesDirectSum) {
  const ContentionProfile p({0.1, 0.5, 0.9});
  const double direct = 0.5 * (QContribution(2, 0, p) + QContribution(2, 2, p));
  EXPECT_NEAR(AggregatorPure(2, p, 0.5, {true, false, true}), direct, 1e-15);
}

TEST(AggregatorTest, MixedReductions) {
  const ContentionProfile p({0.1, 0.5, 0.9});
  const std::vector<double> ones(3, 1.0);
  const std::vector<double> zeros(3, 0.0);
  const std::vector<double> fifth(3, 0.2);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(AggregatorMixed(i, p, ones, 0.4), AggregatorPure(i, p, 0.4),
                1e-15);
    EXPECT_EQ(AggregatorMixed(i, p, zeros, 0.4), 0.0);
    EXPECT_NEAR(AggregatorMixed(i, p, fifth, 0.4),
                AggregatorPure(i, p, 0.4) / 5, 1e-15);
  }
}

TEST(AggregatorTest, MixedRejectsWrongLength) {
  const ContentionProfile p({0.1, 0.5, 0.9});
  EXPECT_THROW(AggregatorMixed(0, p, std::vector<double>(2, 0.5), 0.1),
               ParameterError);
}

TEST(UtilityTest, ZeroRateIsSingular) {
  EXPECT_THROW(UtilityAt(0.0, 0.1), SingularityError);
}

TEST(UtilityTest, ConcreteValue) {
  const double rate = 797262742.7729958;
  EXPECT_NEAR(UtilityAt(rate, 0.0005), std::log(rate) + 0.0005, 1e-12);
}

TEST(UtilityTest, AdditiveInAggregator) {
  const GameSpec game = TwoChannelGame();
  const ContentionProfile p = game.Contention();
  const std::vector<double> a = {0.2, 0.7, 0.1};
  const std::vector<double> b = {0.9, 0.0, 0.4};
  const double du = ChannelUtility(game, 0, 0, 1, p, a) -
                    ChannelUtility(game, 0, 0, 1, p, b);
  const double dq = AggregatorMixed(0, p, a, game.gamma) -
                    AggregatorMixed(0, p, b, game.gamma);
  EXPECT_NEAR(du, dq, 1e-12);
  EXPECT_LE(std::abs(du), std::abs(dq) + 1e-12);
}

TEST(ExpectedUtilityTest, DegenerateRowPicksChannel) {
  const GameSpec game = TwoChannelGame();
  Matrix s = Matrix::Uniform(3, 2);
  s(1, 0) = 0.0;
  s(1, 1) = 1.0;
  const ContentionProfile p = game.Contention();
  EXPECT_NEAR(ExpectedUtility(game, 1, 0, p, s),
              ChannelUtility(game, 1, 0, 1, p, s.Column(1)), 1e-12);
}

TEST(ExpectedUtilityTest, WeightedSumOracle) {
  const GameSpec game = TwoChannelGame();
  Matrix s(3, 2);
  const double rows[3][2] = {{0.3, 0.7}, {0.55, 0.45}, {0.9, 0.1}};
  for (int i = 0; i < 3; ++i) {
    for (int d = 0; d < 2; ++d) s(i, d) = rows[i][d];
  }
  const ContentionProfile p = game.Contention();
  for (int i = 0; i < 3; ++i) {
    double oracle = 0.0;
    for (int d = 0; d < 2; ++d) {
      double agg = 0.0;
      for (int l = 0; l < 3; ++l) agg += QContribution(i, l, p) * s(l, d);
      const double rate = 20e6 * std::log2(1 + 0.1 * game.radio.gain(i, d) /
                                                    1e-13);
      oracle += s(i, d) * (std::log(rate) + game.gamma * agg);
    }
    EXPECT_NEAR(ExpectedUtility(game, i, 0, p, s), oracle, 1e-12);
  }
}

TEST(ExpectedUtilityTest, UniformRowIsMeanOfChannels) {
  const GameSpec game = TwoChannelGame();
  const Matrix s = Matrix::Uniform(3, 2);
  const ContentionProfile p = game.Contention();
  const double mean = 0.5 * (ChannelUtility(game, 2, 1, 0, p, s.Column(0)) +
                             ChannelUtility(game, 2, 1, 1, p, s.Column(1)));
  EXPECT_NEAR(ExpectedUtility(game, 2, 1, p, s), mean, 1e-12);
}

TEST(MixedStrategyProfileTest, OptOutRowsBecomeUniform) {
  MixedStrategyProfile profile = MixedStrategyProfile::Uniform(2, 4);
  profile.probabilities(1, 0) = 1.0;
  profile.probabilities(1, 1) = 0.0;
  profile.probabilities(1, 2) = 0.0;
  profile.probabilities(1, 3) = 0.0;
  profile.opt_out[1] = true;
  const Matrix m = profile.WithOptOutUniform();
  for (int d = 0; d < 4; ++d) EXPECT_EQ(m(1, d), 0.25);
}

TEST(MixedStrategyProfileTest, ValidateRejectsBadRow) {
  MixedStrategyProfile profile = MixedStrategyProfile::Uniform(2, 2);
  profile.probabilities(0, 0) = 0.7;
  EXPECT_THROW(profile.Validate(), ParameterError);
}

TEST(GameSpecTest, ValidateCatchesShapeErrors) {
  GameSpec game = TwoChannelGame();
  EXPECT_NO_THROW(game.Validate());
  game.played_action[0] = 5;
  EXPECT_THROW(game.Validate(), ParameterError);
}

}  // namespace
}  // namespace spectrum
