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

#include <cmath>
#include <limits>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "spectrum/errors.h"
#include "spectrum/rng.h"
#include "spectrum/scenario.h"

namespace spectrum {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

double Kl(const std::vector<double>& p, const std::vector<double>& w) {
  double sum = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d) {
    if (p[d] > 0.0) sum += p[d] * std::log(p[d] / w[d]);
  }
  return sum;
}

// Tiny game with every constraint set full and noise-free targets.
struct Fixture {
  GameSpec game;
  AggregatorGrid grid;
  SetValuedTarget targets;
  std::vector<ConstraintSet> csets;

  explicit Fixture(std::uint64_t seed, int n = 3, int k = 2) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.n = n;
    spec.k = k;
    spec.m = 2;
    spec.alpha = 0.1;
    game = GenScenario(spec).game;
    grid = BuildGrid(n, game.gamma, game.alpha);
    targets = SelectTargets(grid, game.Contention(), Matrix::Uniform(n, k),
                            game.gamma, game.alpha, 0.1, {seed, false});
    csets.assign(n, ConstraintSet::Full(k));
  }

  RexpInputs Inputs() const {
    RexpInputs in;
    in.game = &game;
    in.grid = &grid;
    in.targets = &targets;
    in.csets = &csets;
    in.ceiling_offset = game.alpha;
    return in;
  }
};

TEST(LearnerParamsTest, StepFromE2) {
  const LearnerParams p = MakeLearnerParams(1000, 15, 1e-3, 0.25, 0.1, 0.25);
  EXPECT_EQ(p.periods, 8);
  EXPECT_NEAR(p.e2, 2.437256234500943, 1e-9);
  EXPECT_DOUBLE_EQ(p.step, p.e2 / 4.0);
  EXPECT_DOUBLE_EQ(p.epsilon0, PerRoundEpsilon(0.1, 8, 0.25));
}

TEST(LearnerParamsTest, ForcedPeriods) {
  const LearnerParams p =
      MakeLearnerParams(1000, 15, 1e-3, 0.25, 0.1, 0.25, 20);
  EXPECT_EQ(p.periods, 20);
  EXPECT_DOUBLE_EQ(p.e2, E2ForPeriods(1000, 15, 1e-3, 20));
}

TEST(MwUpdateTest, HalvesTheLosingChannel) {
  const std::vector<double> w =
      MwUpdate(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0},
               std::log(2.0));
  EXPECT_THAT(w, Pointwise(DoubleNear(1e-15), std::vector<double>{0.25, 0.5}));
  EXPECT_THAT(KlProject(w, ConstraintSet::Full(2)),
              Pointwise(DoubleNear(1e-15), std::vector<double>{1.0 / 3, 2.0 / 3}));
}

TEST(MwUpdateTest, FlippedSignRewardsLoss) {
  const std::vector<double> w =
      MwUpdate(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0},
               std::log(2.0), /*flip_sign=*/true);
  EXPECT_THAT(KlProject(w, ConstraintSet::Full(2)),
              Pointwise(DoubleNear(1e-15), std::vector<double>{2.0 / 3, 1.0 / 3}));
}

TEST(MwUpdateTest, UniformLossLeavesRowFixed) {
  const std::vector<double> row = {0.1, 0.2, 0.3, 0.4};
  for (double loss : {0.0, 0.4, 1.0}) {
    EXPECT_THAT(
        KlProject(MwUpdate(row, std::vector<double>(4, loss), 2.5),
                  ConstraintSet::Full(4)),
        Pointwise(DoubleNear(1e-14), row));
  }
}

TEST(KlProjectTest, ZeroesDisallowedChannels) {
  ConstraintSet cset = ConstraintSet::Full(3);
  cset.allowed[1] = false;
  EXPECT_THAT(KlProject(std::vector<double>{1.0, 5.0, 3.0}, cset),
              Pointwise(DoubleNear(1e-15), std::vector<double>{0.25, 0.0, 0.75}));
}

TEST(KlProjectTest, CapsRedistributeProportionally) {
  ConstraintSet cset = ConstraintSet::Full(3);
  cset.caps[2] = 0.5;
  EXPECT_THAT(KlProject(std::vector<double>{1.0, 1.0, 8.0}, cset),
              Pointwise(DoubleNear(1e-15), std::vector<double>{0.25, 0.25, 0.5}));
}

TEST(KlProjectTest, OptOutIsUniform) {
  EXPECT_THAT(KlProject(std::vector<double>{9.0, 0.0, 1.0, 0.0},
                        ConstraintSet::OptOut(4)),
              ElementsAre(0.25, 0.25, 0.25, 0.25));
}

TEST(KlProjectTest, NoMassOnSupportIsDegenerate) {
  ConstraintSet cset = ConstraintSet::Full(2);
  cset.allowed[0] = false;
  EXPECT_THROW(KlProject(std::vector<double>{1.0, 0.0}, cset),
               DegenerateSupportError);
}

TEST(KlProjectTest, BeatsRandomFeasibleCandidates) {
  for (std::uint32_t trial = 0; trial < 20; ++trial) {
    KeyedStream stream({3, StreamTag::kTest, trial, 0, 0});
    ConstraintSet cset = ConstraintSet::Full(5);
    std::vector<double> w(5);
    double cap_total = 0.0;
    for (int d = 0; d < 5; ++d) {
      w[d] = 0.05 + stream.NextOpenUniform();
      cset.allowed[d] = d == 0 || stream.NextOpenUniform() < 0.7;
      cset.caps[d] = 0.35 + 0.65 * stream.NextOpenUniform();
      cap_total += cset.allowed[d] ? cset.caps[d] : 0.0;
    }
    if (cap_total < 1.0) continue;
    const std::vector<double> best = KlProject(w, cset);
    ASSERT_TRUE(cset.Contains(best));
    const double best_kl = Kl(best, w);
    int checked = 0;
    while (checked < 1000) {
      std::vector<double> c(5, 0.0);
      double sum = 0.0;
      for (int d = 0; d < 5; ++d) {
        if (!cset.allowed[d]) continue;
        c[d] = -std::log(stream.NextOpenUniform());
        sum += c[d];
      }
      for (double& v : c) v /= sum;
      if (!cset.Contains(c)) continue;
      ++checked;
      ASSERT_GE(Kl(c, w), best_kl - 1e-12);
    }
  }
}

TEST(ChannelLossesTest, NormalizedDeficit) {
  const ConstraintSet cset = ConstraintSet::Full(3);
  EXPECT_THAT(ChannelLosses(std::vector<double>{1.0, 2.0, 3.0},
                            std::vector<double>{0.0, 0.5, 0.0}, cset),
              Pointwise(DoubleNear(1e-15), std::vector<double>{1.0, 0.25, 0.0}));
}

TEST(ChannelLossesTest, DisallowedChannelsLoseFully) {
  ConstraintSet cset = ConstraintSet::Full(3);
  cset.allowed[2] = false;
  EXPECT_THAT(ChannelLosses(std::vector<double>{1.0, 2.0, 9.0},
                            std::vector<double>{0.0, 0.0, 0.0}, cset),
              ElementsAre(1.0, 0.0, 1.0));
}

TEST(ChannelLossesTest, FlatUtilityHasNoLoss) {
  EXPECT_THAT(ChannelLosses(std::vector<double>{1.0, 1.5},
                            std::vector<double>{0.5, 0.0},
                            ConstraintSet::Full(2)),
              ElementsAre(0.0, 0.0));
}

TEST(ScoreTest, ScoreFMatchesHandValue) {
  EXPECT_NEAR(ScoreF(std::vector<double>{1.0, 0.5},
                     std::vector<double>{0.25, 0.75}, 0.1, 0.5),
              0.5 * (0.25 + 0.375) - 0.1, 1e-15);
}

TEST(ScoreTest, RexpPenalizesGapAndCeiling) {
  EXPECT_EQ(RexpScore(0.3, 0.3, 1.0), 0.0);
  EXPECT_NEAR(RexpScore(0.5, 0.3, 1.0), -0.2, 1e-15);
  EXPECT_NEAR(RexpScore(0.5, 0.3, 0.4), -0.3, 1e-15);
}

TEST(RexpRoundTest, ZeroEpsilonPicksUniformly) {
  const Fixture f(2);
  const Matrix current = Matrix::Uniform(3, 2);
  std::vector<int> counts(f.grid.size(), 0);
  const int rounds = 4000;
  for (int t = 1; t <= rounds; ++t) {
    const Matrix q = RexpRound(f.Inputs(), current, t, 0.0, {5});
    for (std::size_t g = 0; g < f.grid.size(); ++g) {
      counts[g] += q(0, 0) == f.grid.values[g];
    }
  }
  const double p = 1.0 / f.grid.size();
  for (int c : counts) {
    EXPECT_NEAR(c / double(rounds), p, 4 * std::sqrt(p * (1 - p) / rounds));
  }
}

TEST(RexpRoundTest, SinglePointGridAlwaysPublished) {
  Fixture f(2);
  f.grid.values = {0.4};
  const Matrix q = RexpRound(f.Inputs(), Matrix::Uniform(3, 2), 1, 0.01, {5});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(q(i, 0), 0.4);
    EXPECT_EQ(q(i, 1), 0.4);
  }
}

TEST(RexpRoundTest, OptOutAndDisallowedEntriesStayZero) {
  Fixture f(2);
  f.csets[0] = ConstraintSet::OptOut(2);
  f.csets[1].allowed[1] = false;
  f.grid.values = {0.4};
  const Matrix q = RexpRound(f.Inputs(), Matrix::Uniform(3, 2), 1, 0.01, {5});
  EXPECT_EQ(q(0, 0), 0.0);
  EXPECT_EQ(q(0, 1), 0.0);
  EXPECT_EQ(q(1, 1), 0.0);
  EXPECT_EQ(q(1, 0), 0.4);
}

TEST(MwRunTest, TrajectoryShapeAndFeasibility) {
  const Fixture f(7);
  LearnerParams params = MakeLearnerParams(3, 2, f.game.gamma, 0.25, 0.1, 0.25);
  params.periods = 6;
  const LearnerOutput out = MwRun(f.Inputs(), params, {7});
  ASSERT_EQ(out.trajectory.played.size(), 7u);
  ASSERT_EQ(out.trajectory.periods(), 6);
  ASSERT_EQ(out.trajectory.losses.size(), 6u);
  for (const Matrix& m : out.trajectory.played) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(f.csets[i].Contains(m.row(i)));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(f.csets[i].Contains(out.suggestion.row(i)));
  }
}

TEST(MwRunTest, SinglePeriodSuggestionIsFirstUpdate) {
  const Fixture f(8);
  LearnerParams params = MakeLearnerParams(3, 2, f.game.gamma, 0.25, 0.1, 0.25);
  params.periods = 1;
  const LearnerOutput out = MwRun(f.Inputs(), params, {8});
  EXPECT_EQ(out.suggestion, out.trajectory.played[1]);
}

TEST(MwRunTest, AllOptOutStaysUniform) {
  Fixture f(9);
  f.csets.assign(3, ConstraintSet::OptOut(2));
  const LearnerParams params =
      MakeLearnerParams(3, 2, f.game.gamma, 0.25, 0.1, 0.25, 4);
  const LearnerOutput out = MwRun(f.Inputs(), params, {9});
  EXPECT_EQ(out.suggestion, Matrix::Uniform(3, 2));
  for (const Matrix& q : out.trajectory.published) {
    EXPECT_EQ(q, Matrix(3, 2, 0.0));
  }
}

TEST(MwRunTest, ReplayIsBitExact) {
  const Fixture f(10);
  const LearnerParams params =
      MakeLearnerParams(3, 2, f.game.gamma, 0.25, 0.1, 0.25, 5);
  const LearnerOutput out = MwRun(f.Inputs(), params, {10});
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<std::vector<double>> published;
    for (const Matrix& q : out.trajectory.published) {
      published.emplace_back(q.row(i).begin(), q.row(i).end());
    }
    const std::vector<double> row = ReplayUserRow(
        PlayedLogRates(f.game, i), f.csets[i], published, params);
    EXPECT_TRUE(std::equal(row.begin(), row.end(),
                           out.suggestion.row(i).begin()));
  }
}

TEST(MwRunTest, RejectsNonPositivePeriods) {
  const Fixture f(11);
  LearnerParams params;
  params.periods = 0;
  EXPECT_THROW(MwRun(f.Inputs(), params, {11}), ParameterError);
}

TEST(CertificateTest, HoldsOnTinyRun) {
  const Fixture f(12);
  const LearnerParams params =
      MakeLearnerParams(3, 2, f.game.gamma, 0.25, 0.1, 0.25);
  const LearnerOutput out = MwRun(f.Inputs(), params, {12});
  for (const CertificateEntry& e :
       RegretCertificate(out.trajectory, params, f.csets, 3, f.game.gamma)) {
    EXPECT_TRUE(e.holds);
    EXPECT_GE(e.slack, 0.0);
  }
}

TEST(CertificateTest, ZeroLossesGiveFullSlack) {
  Trajectory tr;
  tr.played = {Matrix::Uniform(1, 2), Matrix::Uniform(1, 2)};
  tr.published = {Matrix(1, 2, 0.0)};
  tr.losses = {Matrix(1, 2, 0.0)};
  LearnerParams params;
  params.e2 = 0.6;
  const std::vector<CertificateEntry> c =
      RegretCertificate(tr, params, {ConstraintSet::Full(2)}, 1, 1.0);
  EXPECT_TRUE(c[0].holds);
  EXPECT_DOUBLE_EQ(c[0].slack, 0.3);
}

TEST(CertificateTest, DetectsExcessRegret) {
  Trajectory tr;
  Matrix bad(1, 2, 0.0);
  bad(0, 0) = 1.0;
  Matrix loss(1, 2, 0.0);
  loss(0, 0) = 1.0;
  tr.played = {bad, bad};
  tr.published = {Matrix(1, 2, 0.0)};
  tr.losses = {loss};
  LearnerParams params;
  params.e2 = 0.2;
  const std::vector<CertificateEntry> c =
      RegretCertificate(tr, params, {ConstraintSet::Full(2)}, 1, 1.0);
  EXPECT_FALSE(c[0].holds);
  EXPECT_NEAR(c[0].slack, 0.1 - 1.0, 1e-15);
}

TEST(CertificateTest, OptOutUsersCarryBound) {
  Trajectory tr;
  tr.played = {Matrix::Uniform(1, 2), Matrix::Uniform(1, 2)};
  tr.published = {Matrix(1, 2, 0.0)};
  tr.losses = {Matrix(1, 2, 0.0)};
  LearnerParams params;
  params.e2 = 1.0;
  const auto c = RegretCertificate(tr, params, {ConstraintSet::OptOut(2)}, 2,
                                   0.5);
  EXPECT_TRUE(c[0].holds);
  EXPECT_DOUBLE_EQ(c[0].slack, 0.5);
}

}  // namespace
}  // namespace spectrum
