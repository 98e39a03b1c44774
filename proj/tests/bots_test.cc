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


#include "irps/bots.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "irps/error.h"
#include "irps/rng.h"

namespace irps {
namespace {

TEST(RosterTest, HasFifteenBotsWithUniqueIds) {
  const std::vector<BotSpec> roster = DefaultRoster();
  ASSERT_EQ(roster.size(), 15u);
  std::set<int> ids;
  int nonadaptive = 0;
  for (const BotSpec& b : roster) {
    ids.insert(b.bot_id);
    nonadaptive += b.bot_class == BotClass::kNonadaptive;
  }
  EXPECT_EQ(ids.size(), 15u);
  EXPECT_EQ(nonadaptive, 7);
  EXPECT_THROW(FindBot(roster, 99), Error);
}

TEST(RosterTest, JsonRoundTrip) {
  const std::vector<BotSpec> roster = DefaultRoster();
  const std::vector<BotSpec> back = RosterFromJson(RosterToJson(roster));
  ASSERT_EQ(back.size(), roster.size());
  for (std::size_t i = 0; i < roster.size(); ++i) {
    EXPECT_EQ(back[i].bot_id, roster[i].bot_id);
    EXPECT_EQ(back[i].name, roster[i].name);
    EXPECT_EQ(back[i].rule.kind, roster[i].rule.kind);
    EXPECT_EQ(back[i].rule.context, roster[i].rule.context);
    EXPECT_EQ(back[i].rule.target, roster[i].rule.target);
    EXPECT_DOUBLE_EQ(back[i].noise, roster[i].noise);
  }
}

TEST(RosterTest, RejectsMalformedEntries) {
  nlohmann::json j = RosterToJson(DefaultRoster());
  j[0].erase("rule");
  EXPECT_THROW(RosterFromJson(j), SchemaError);
  EXPECT_THROW(RosterFromJson(nlohmann::json::object()), SchemaError);
}

TEST(BotPolicyTest, PoliciesAreDistributions) {
  Rng rng(3);
  for (const BotSpec& bot : DefaultRoster()) {
    BotState s = InitialBotState(bot);
    for (int t = 0; t < 40; ++t) {
      const auto p = BotPolicy(bot, s);
      EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
      for (double v : p) EXPECT_GE(v, 0.0);
      ObserveInPlace(bot, s, BotAct(bot, s, rng), rng.UniformAction());
    }
  }
}

TEST(BotPolicyTest, WarmupIsUniform) {
  for (const BotSpec& bot : DefaultRoster()) {
    if (bot.warmup_needed == 0) continue;
    const auto p = BotPolicy(bot, InitialBotState(bot));
    for (double v : p) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15) << bot.name;
  }
}

TEST(BotPolicyTest, BiasBotPutsNinetyPercentPlusNoiseOnRock) {
  const BotSpec bot = FindBot(DefaultRoster(), 1);
  const auto p = BotPolicy(bot, InitialBotState(bot));
  EXPECT_NEAR(p[0], 0.9 + 0.1 / 3, 1e-12);
  EXPECT_NEAR(p[1], 0.1 / 3, 1e-12);
}

// Follows each nonadaptive transition rule by hand.
TEST(BotPolicyTest, TransitionBotsFollowTheirRule) {
  const std::vector<BotSpec> roster = DefaultRoster();
  for (int id = 2; id <= 7; ++id) {
    const BotSpec& bot = FindBot(roster, id);
    for (Action mine : kAllActions) {
      for (Action theirs : kAllActions) {
        BotState s = BotObserve(bot, InitialBotState(bot), mine, theirs);
        const std::vector<Action> moves = RuleMoves(bot, s);
        ASSERT_EQ(moves.size(), 1u);
        const Action base = bot.rule.kind == BotRule::Kind::kSelfTransition ? mine : theirs;
        EXPECT_EQ(moves[0], ApplyTransition(base, bot.rule.transition)) << bot.name;
      }
    }
  }
}

// Independent counter for bot 8: beat the opponent's most frequent move.
TEST(AdaptiveBotTest, FrequencyBotCountersTheModalMove) {
  const BotSpec bot = FindBot(DefaultRoster(), 8);
  Rng rng(11);
  BotState s = InitialBotState(bot);
  std::array<int, 3> counts{};
  for (int t = 0; t < 60; ++t) {
    const Action opp = rng.Uniform() < 0.5 ? Action::kScissors : rng.UniformAction();
    ObserveInPlace(bot, s, rng.UniformAction(), opp);
    ++counts[ToInt(opp)];
    const int best = *std::max_element(counts.begin(), counts.end());
    std::set<Action> expected;
    for (Action a : kAllActions) {
      if (counts[ToInt(a)] == best) expected.insert(Beats(a));
    }
    const std::vector<Action> got = RuleMoves(bot, s);
    EXPECT_EQ(std::set<Action>(got.begin(), got.end()), expected);
  }
}

TEST(AdaptiveBotTest, JointContextCountsPerCell) {
  const BotSpec bot = FindBot(DefaultRoster(), 13);
  BotState s = InitialBotState(bot);
  ObserveInPlace(bot, s, Action::kRock, Action::kPaper);      // warmup
  ObserveInPlace(bot, s, Action::kPaper, Action::kScissors);  // cell (R, P)
  EXPECT_EQ(CountAt(bot, s, 0 * 3 + 1, ToInt(Action::kScissors)), 1);
  ObserveInPlace(bot, s, Action::kRock, Action::kPaper);  // cell (P, S)
  EXPECT_EQ(CountAt(bot, s, 1 * 3 + 2, ToInt(Action::kPaper)), 1);
  // Last joint action is (R, P); the count there predicts Scissors, countered by Rock.
  const std::vector<Action> moves = RuleMoves(bot, s);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0], Action::kRock);
}

TEST(BotActTest, SameSeedSameStream) {
  for (const BotSpec& bot : DefaultRoster()) {
    Rng a(5), b(5), opp(9);
    BotState sa = InitialBotState(bot), sb = InitialBotState(bot);
    for (int t = 0; t < 50; ++t) {
      const Action ma = BotAct(bot, sa, a);
      const Action mb = BotAct(bot, sb, b);
      ASSERT_EQ(ma, mb);
      const Action o = opp.UniformAction();
      ObserveInPlace(bot, sa, ma, o);
      ObserveInPlace(bot, sb, mb, o);
    }
  }
}

TEST(BotActTest, EmpiricalFrequenciesMatchPolicy) {
  const BotSpec bot = FindBot(DefaultRoster(), 1);
  Rng rng(21);
  const BotState s = InitialBotState(bot);
  std::array<int, 3> counts{};
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[ToInt(BotAct(bot, s, rng))];
  const auto p = BotPolicy(bot, s);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(counts[k] / double(n), p[k], 0.01);
}

TEST(OracleTest, BestResponseMaximizesExpectedReward) {
  Rng rng(2);
  for (const BotSpec& bot : DefaultRoster()) {
    BotState s = InitialBotState(bot);
    for (int t = 0; t < 20; ++t) {
      const auto p = BotPolicy(bot, s);
      const Action br = OracleBestResponse(bot, s, rng);
      double ev_br = 0, ev_best = -10;
      for (Action a : kAllActions) {
        double ev = 0;
        for (Action o : kAllActions) ev += p[ToInt(o)] * EgoReward(a, o);
        ev_best = std::max(ev_best, ev);
        if (a == br) ev_br = ev;
      }
      EXPECT_NEAR(ev_br, ev_best, 1e-12);
      ObserveInPlace(bot, s, BotAct(bot, s, rng), br);
    }
  }
}

}  // namespace
}  // namespace irps
