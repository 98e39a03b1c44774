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


#include "irps/discovery.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"
#include "irps/error.h"
#include "irps/mutator.h"
#include "irps/rng.h"
#include "test_util.h"

namespace irps {
namespace {

Candidate Synthetic(int i, double score, double effort) {
  Candidate c;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016x", i);
  c.id = buf;
  c.program = dsl::Builtin("nash");
  c.text = dsl::Serialize(c.program);
  c.train_score = score;
  c.effort = effort;
  return c;
}

// Quadratic reference: a point is kept unless some other point dominates it
// or ties it exactly with a smaller id.
std::set<std::string> FrontierOracle(const std::vector<Candidate>& cs) {
  std::set<std::string> out;
  for (const Candidate& a : cs) {
    bool beaten = false;
    for (const Candidate& b : cs) {
      if (&a == &b) continue;
      const bool dominates = b.train_score >= a.train_score && b.effort <= a.effort &&
                             (b.train_score > a.train_score || b.effort < a.effort);
      const bool tie_wins = b.train_score == a.train_score && b.effort == a.effort && b.id < a.id;
      if (dominates || tie_wins) beaten = true;
    }
    if (!beaten) out.insert(a.id);
  }
  return out;
}

TEST(DominanceTest, Definition) {
  EXPECT_TRUE(Dominates(0.5, 10, 0.4, 10));
  EXPECT_TRUE(Dominates(0.5, 9, 0.5, 10));
  EXPECT_FALSE(Dominates(0.5, 10, 0.5, 10));
  EXPECT_FALSE(Dominates(0.6, 11, 0.5, 10));
}

TEST(ArchiveTest, FrontierMatchesBruteForceOnRandomArchives) {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    Archive archive;
    std::vector<Candidate> all;
    std::vector<FrontierPoint> points;
    for (int i = 0; i < 1000; ++i) {
      // Coarse grids force ties and duplicates.
      const double score = 0.3 + rng.UniformInt(60) * 0.001;
      const double effort = rng.UniformInt(200) * 5.0;
      Candidate c = Synthetic(trial * 10000 + i, score, effort);
      all.push_back(c);
      points.push_back({c.id, score, effort});
      ASSERT_TRUE(archive.Add(c));
      if (i % 97 == 0) {
        std::set<std::string> got;
        for (const Candidate* f : archive.Frontier()) got.insert(f->id);
        EXPECT_EQ(got, FrontierOracle(all));
      }
    }
    std::set<std::string> got, brute;
    for (const Candidate* f : archive.Frontier()) got.insert(f->id);
    for (int k : BruteForceFrontier(points)) brute.insert(points[k].id);
    EXPECT_EQ(got, FrontierOracle(all));
    EXPECT_EQ(got, brute);
    EXPECT_FALSE(archive.Add(all[0]));
  }
}

TEST(SbbTest, WorkedToyExample) {
  Archive a;
  a.Add(Synthetic(1, 0.400, 100));
  a.Add(Synthetic(2, 0.398, 50));
  a.Add(Synthetic(3, 0.370, 10));
  std::map<std::string, double> eval;
  for (const Candidate& c : a.candidates()) eval[c.id] = c.train_score;
  const SbbResult r = SelectSbb(a, eval, 0.005);
  EXPECT_EQ(a.Get(r.id).effort, 50.0);
  EXPECT_DOUBLE_EQ(r.global_max, 0.400);
  EXPECT_EQ(r.eligible.size(), 2u);
}

TEST(SbbTest, MissingFrontierScoreIsAContractViolation) {
  Archive a;
  a.Add(Synthetic(1, 0.4, 100));
  EXPECT_THROW(SelectSbb(a, {}, 0.005), ContractViolation);
  EXPECT_THROW(SelectSbb(a, {{a.candidates()[0].id, 0.4}}, 0.0), Error);
}

TEST(SbbTest, SelectedEffortIsMonotoneInEpsilon) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Archive a;
    for (int i = 0; i < 200; ++i) {
      a.Add(Synthetic(trial * 1000 + i, 0.3 + 0.1 * rng.Uniform(), 1000 * rng.Uniform()));
    }
    std::map<std::string, double> eval;
    for (const Candidate* c : a.Frontier()) eval[c->id] = c->train_score - 0.01 * rng.Uniform();
    double last = std::numeric_limits<double>::infinity();
    for (double eps : {0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.2}) {
      const SbbResult r = SelectSbb(a, eval, eps);
      EXPECT_LE(a.Get(r.id).effort, last);
      last = a.Get(r.id).effort;
    }
  }
}

TEST(ArchiveTest, JsonlRoundTrip) {
  Archive a;
  const std::vector<GameTrajectory> games = testing::RandomGames(4, 30, 2);
  SearchConfig cfg;
  cfg.fit.restarts = 1;
  cfg.fit.max_steps = 30;
  for (const std::string& name : {"nash", "gptoss_sbb"}) {
    a.Add(ScoreProgram(dsl::Builtin(name), games, cfg));
  }
  const Archive b = Archive::FromJsonl(a.ToJsonl());
  ASSERT_EQ(b.size(), 2);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(b.candidates()[i].id, a.candidates()[i].id);
    EXPECT_EQ(b.candidates()[i].text, a.candidates()[i].text);
    EXPECT_EQ(b.candidates()[i].train_score, a.candidates()[i].train_score);
    EXPECT_EQ(b.candidates()[i].effort, a.candidates()[i].effort);
  }
  EXPECT_EQ(b.FrontierIndices(), a.FrontierIndices());
  // A tampered id no longer matches the program.
  nlohmann::json j = Archive::CandidateToJson(a.candidates()[1]);
  j["id"] = "0000000000000000";
  EXPECT_THROW(Archive::CandidateFromJson(j), Error);
}

TEST(ProgramIdTest, IgnoresNameButNotStructure) {
  dsl::Program p = dsl::Builtin("gptoss_sbb");
  const std::string id = ProgramId(p);
  EXPECT_EQ(id.size(), 16u);
  p.name = "renamed";
  EXPECT_EQ(ProgramId(p), id);
  EXPECT_NE(ProgramId(dsl::Builtin("human_sbb")), id);
}

TEST(ScoreProgramTest, NashScoresOneThirdWithZeroEffort) {
  const std::vector<GameTrajectory> games = testing::RandomGames(4, 30, 3);
  const Candidate c = ScoreProgram(dsl::Builtin("nash"), games, SearchConfig{});
  EXPECT_NEAR(c.train_score, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(c.effort, 0.0);
}

TEST(EvolveTest, BudgetOneIsTheNashTemplate) {
  const std::vector<GameTrajectory> games = testing::RandomGames(4, 40, 5);
  SearchConfig cfg;
  cfg.budget = 1;
  RuleMutator mutator;
  const SearchResult r = Evolve(games, cfg, mutator);
  ASSERT_EQ(r.archive.size(), 1);
  EXPECT_EQ(r.archive.candidates()[0].mutation, "template");
  EXPECT_EQ(r.archive.candidates()[0].program.name, "nash");
}

TEST(EvolveTest, SmallRunIsDeterministicAndRespectsBudget) {
  const std::vector<GameTrajectory> games = testing::RandomGames(4, 40, 6);
  SearchConfig cfg;
  cfg.budget = 12;
  cfg.seed = 3;
  cfg.fit.restarts = 1;
  cfg.fit.max_steps = 40;
  RuleMutator m1, m2;
  std::vector<std::string> streamed;
  const SearchResult a = Evolve(games, cfg, m1, [&](const Candidate& c) { streamed.push_back(c.id); });
  cfg.jobs = 2;
  const SearchResult b = Evolve(games, cfg, m2);
  EXPECT_LE(a.archive.size(), 12);
  ASSERT_EQ(a.archive.size(), b.archive.size());
  for (int i = 0; i < a.archive.size(); ++i) {
    EXPECT_EQ(a.archive.candidates()[i].id, b.archive.candidates()[i].id);
    EXPECT_EQ(a.archive.candidates()[i].train_score, b.archive.candidates()[i].train_score);
  }
  EXPECT_EQ(static_cast<int>(streamed.size()), a.archive.size());
  for (const Candidate& c : a.archive.candidates()) {
    if (c.mutation == "template") continue;
    EXPECT_TRUE(a.archive.Contains(c.parent_id));
  }
}

TEST(SearchConfigTest, JsonRoundTrip) {
  SearchConfig cfg;
  cfg.budget = 77;
  cfg.epsilon = 0.01;
  cfg.mutator = MutatorKind::kExternal;
  const SearchConfig back = SearchConfigFromJson(SearchConfigToJson(cfg));
  EXPECT_EQ(back.budget, 77);
  EXPECT_DOUBLE_EQ(back.epsilon, 0.01);
  EXPECT_EQ(back.mutator, MutatorKind::kExternal);
  EXPECT_EQ(back.fit.restarts, cfg.fit.restarts);
}

}  // namespace
}  // namespace irps
