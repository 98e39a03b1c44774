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


#include "irps/mutator.h"

#include <gtest/gtest.h>

#include <map>

#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"
#include "irps/dsl/validate.h"
#include "irps/error.h"
#include "irps/rng.h"

namespace irps {
namespace {

Candidate FromBuiltin(const std::string& name) {
  Candidate c;
  c.program = dsl::Builtin(name);
  c.text = dsl::Serialize(c.program);
  c.id = ProgramId(c.program);
  return c;
}

TEST(RuleMutatorTest, EveryProposalIsValid) {
  RuleMutator m;
  Rng rng(3);
  std::map<std::string, int> tags;
  for (const std::string& name : dsl::BuiltinNames()) {
    const Candidate parent = FromBuiltin(name);
    const Candidate insp = FromBuiltin("gemini_sbb");
    const Candidate* inspirations[] = {&insp};
    for (int i = 0; i < 200; ++i) {
      const Proposal p = m.Propose(parent, inspirations, rng);
      EXPECT_TRUE(dsl::Validate(p.program).empty()) << p.tag << "\n" << dsl::Serialize(p.program);
      ++tags[p.tag];
    }
  }
  // Most of the catalog fires at least once across the builtins.
  EXPECT_GE(tags.size(), RuleMutator::Catalog().size() - 2);
}

TEST(RuleMutatorTest, ChainsOfMutationsStayValid) {
  RuleMutator m;
  Rng rng(5);
  Candidate cur = FromBuiltin("nash");
  for (int i = 0; i < 300; ++i) {
    const Proposal p = m.Propose(cur, {}, rng);
    ASSERT_TRUE(dsl::Validate(p.program).empty()) << dsl::Serialize(p.program);
    ASSERT_EQ(dsl::Parse(dsl::Serialize(p.program)), p.program);
    cur.program = p.program;
    cur.text = dsl::Serialize(p.program);
  }
}

TEST(RuleMutatorTest, SeededProposalsRepeat) {
  RuleMutator m;
  const Candidate parent = FromBuiltin("human_sbb");
  Rng a(9), b(9);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(m.Propose(parent, {}, a).program, m.Propose(parent, {}, b).program);
  }
}

TEST(RuleMutatorTest, NamedMutationsDoWhatTheySay) {
  Rng rng(1);
  const dsl::Program nash = dsl::Builtin("nash");
  const auto q = RuleMutator::Apply("add_q_vector", nash, {}, rng);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(q->states.size(), 1u);
  EXPECT_EQ(q->states[0].rank, 1);
  const auto sticky = RuleMutator::Apply("add_stickiness", nash, {}, rng);
  ASSERT_TRUE(sticky.has_value());
  EXPECT_EQ(sticky->param_count, 1);
  EXPECT_THROW(RuleMutator::Apply("no_such_rule", nash, {}, rng), Error);
}

TEST(NormalizeTest, DropsUnusedStatesAndRenumbersParams) {
  const dsl::Program p = dsl::Parse(
      "(program n (params 4)\n"
      "  (state dead (shape 3) (init 0) (at a) (ema (slice dead a) r unit0))\n"
      "  (state live (shape 3) (init 0) (at) (add (slice live) (onehot a_opp)))\n"
      "  (policy (mul param3 (counter (slice live)))))");
  const dsl::Program n = NormalizeProgram(p);
  ASSERT_EQ(n.states.size(), 1u);
  EXPECT_EQ(n.states[0].name, "live");
  EXPECT_EQ(n.param_count, 1);
  EXPECT_TRUE(dsl::Validate(n).empty());
}

TEST(ExtractProgramTextTest, FindsBalancedProgram) {
  const std::string reply =
      "Here you go:\n```\n(program x (params 0) ; note (unbalanced\n  (policy [1 1 1]))\n```\n";
  const auto text = ExtractProgramText(reply);
  ASSERT_TRUE(text.has_value());
  EXPECT_EQ(dsl::Parse(*text).name, "x");
  EXPECT_FALSE(ExtractProgramText("no program here").has_value());
}

TEST(ExternalMutatorTest, UsesReplyWhenValid) {
  ExternalMutator m([](const std::string& prompt) {
    EXPECT_NE(prompt.find("(program"), std::string::npos);
    return std::string("(program reply (params 1) (policy (mul param0 [1 0 0])))");
  });
  Rng rng(1);
  const Proposal p = m.Propose(FromBuiltin("nash"), {}, rng);
  EXPECT_FALSE(p.external_failure);
  EXPECT_EQ(p.program.param_count, 1);
  EXPECT_EQ(m.failures(), 0);
}

TEST(ExternalMutatorTest, FallsBackOnBadReplyOrTransportError) {
  ExternalMutator bad([](const std::string&) { return std::string("(program x (params 11) (policy 1))"); });
  ExternalMutator down([](const std::string&) -> std::string { throw Error("connection refused"); });
  Rng rng(2);
  const Proposal a = bad.Propose(FromBuiltin("nash"), {}, rng);
  EXPECT_TRUE(a.external_failure);
  EXPECT_TRUE(dsl::Validate(a.program).empty());
  const Proposal b = down.Propose(FromBuiltin("nash"), {}, rng);
  EXPECT_TRUE(b.external_failure);
  EXPECT_NE(b.error.find("connection refused"), std::string::npos);
  EXPECT_EQ(bad.failures(), 1);
  EXPECT_EQ(down.failures(), 1);
}

TEST(MutationPromptTest, ContainsGrammarAndSources) {
  Candidate parent = FromBuiltin("gptoss_sbb");
  parent.train_score = 0.41;
  const Candidate insp = FromBuiltin("human_sbb");
  const Candidate* inspirations[] = {&insp};
  const std::string prompt = BuildMutationPrompt(parent, inspirations);
  EXPECT_NE(prompt.find(parent.text), std::string::npos);
  EXPECT_NE(prompt.find(insp.text), std::string::npos);
  EXPECT_NE(prompt.find("ema"), std::string::npos);
}

}  // namespace
}  // namespace irps
