// Copyright 2026 The IRPS Lab Authors
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


#include "irps/game.h"

#include <gtest/gtest.h>

#include "irps/error.h"

namespace irps {
namespace {

// Rows: ego Rock, Paper, Scissors; columns: opponent Rock, Paper, Scissors.
constexpr int kTable[3][3] = {{0, -1, 3}, {3, 0, -1}, {-1, 3, 0}};

TEST(PayoffTest, MatchesTableForAllPairs) {
  for (Action ego : kAllActions) {
    for (Action opp : kAllActions) {
      const Payoff p = PayoffOf(ego, opp);
      EXPECT_EQ(p.ego, kTable[ToInt(ego)][ToInt(opp)]);
      EXPECT_EQ(p.opp, kTable[ToInt(opp)][ToInt(ego)]);
    }
  }
}

TEST(PayoffTest, OutcomeAndBeatsAgree) {
  for (Action ego : kAllActions) {
    for (Action opp : kAllActions) {
      const Outcome o = OutcomeOf(ego, opp);
      if (ego == opp) {
        EXPECT_EQ(o, Outcome::kTie);
      } else if (Beats(opp) == ego) {
        EXPECT_EQ(o, Outcome::kWin);
        EXPECT_EQ(OutcomeOf(opp, ego), Outcome::kLoss);
      } else {
        EXPECT_EQ(o, Outcome::kLoss);
        EXPECT_EQ(Beats(ego), opp);
      }
    }
  }
  EXPECT_EQ(Beats(Action::kRock), Action::kPaper);
  EXPECT_EQ(Beats(Action::kPaper), Action::kScissors);
  EXPECT_EQ(Beats(Action::kScissors), Action::kRock);
}

TEST(PayoffTest, GameIsNotZeroSum) {
  EXPECT_EQ(PayoffOf(Action::kPaper, Action::kRock).ego +
                PayoffOf(Action::kPaper, Action::kRock).opp,
            2);
}

TEST(TransitionTest, RoundTripsEveryPair) {
  for (Action from : kAllActions) {
    for (Action to : kAllActions) {
      EXPECT_EQ(ApplyTransition(from, ClassifyTransition(from, to)), to);
    }
  }
  for (Action from : kAllActions) {
    for (TransitionKind k :
         {TransitionKind::kPositive, TransitionKind::kNegative, TransitionKind::kNil}) {
      EXPECT_EQ(ClassifyTransition(from, ApplyTransition(from, k)), k);
    }
  }
}

TEST(TransitionTest, PositiveMovesToTheBeatingAction) {
  for (Action a : kAllActions) {
    EXPECT_EQ(ApplyTransition(a, TransitionKind::kPositive), Beats(a));
    EXPECT_EQ(ApplyTransition(a, TransitionKind::kNil), a);
    EXPECT_EQ(Beats(ApplyTransition(a, TransitionKind::kNegative)), a);
  }
  EXPECT_EQ(TransitionFromName(TransitionName(TransitionKind::kNegative)),
            TransitionKind::kNegative);
}

TEST(ActionTest, FromIntRejectsOutOfRange) {
  EXPECT_EQ(ActionFromInt(2), Action::kScissors);
  EXPECT_THROW(ActionFromInt(3), Error);
  EXPECT_THROW(ActionFromInt(-1), Error);
}

TEST(TrajectoryTest, ValidateCatchesGapsAndBadRewards) {
  GameTrajectory g;
  g.game_id = "x";
  g.rounds = {RoundRecord::Make(0, Action::kRock, Action::kPaper),
              RoundRecord::Make(1, Action::kPaper, Action::kRock)};
  EXPECT_NO_THROW(ValidateTrajectory(g));
  g.rounds[1].reward = 0;
  EXPECT_THROW(ValidateTrajectory(g), Error);
  g.rounds[1] = RoundRecord::Make(2, Action::kPaper, Action::kRock);
  EXPECT_THROW(ValidateTrajectory(g), Error);
}

}  // namespace
}  // namespace irps
