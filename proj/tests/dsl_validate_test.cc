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


#include "irps/dsl/validate.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"

namespace irps::dsl {
namespace {

bool HasCode(const std::vector<Diagnostic>& d, const std::string& code) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.code == code; });
}

TEST(DslValidateTest, BuiltinsAreValid) {
  for (const std::string& name : BuiltinNames()) {
    EXPECT_TRUE(Validate(Builtin(name)).empty()) << name;
  }
}

TEST(DslValidateTest, ParamBudget) {
  const auto d = Validate(Parse("(program x (params 11) (policy [1 1 1]))"));
  EXPECT_TRUE(HasCode(d, "param_budget"));
  EXPECT_TRUE(HasCode(Validate(Parse("(program x (params 2) (policy (mul param2 [1 0 0])))")),
                      "param_index"));
}

TEST(DslValidateTest, RankMismatchOnSlice) {
  const auto d = Validate(Parse(
      "(program x (params 0)\n"
      "  (state f (shape 3) (init 0) (at) (add (slice f) (onehot a_opp)))\n"
      "  (policy (slice f a a_opp)))"));
  EXPECT_TRUE(HasCode(d, "shape"));
}

TEST(DslValidateTest, UnknownStateAndPolicyRank) {
  EXPECT_TRUE(HasCode(Validate(Parse("(program x (params 0) (policy (slice nope)))")), "state"));
  // Scalars broadcast to a uniform policy; matrices do not.
  EXPECT_TRUE(Validate(Parse("(program x (params 0) (policy 1))")).empty());
  EXPECT_TRUE(HasCode(Validate(Parse("(program x (params 0)\n"
                                     "  (state m (shape 3 3) (init 0) (at) (slice m))\n"
                                     "  (policy (slice m)))")),
                      "shape"));
}

TEST(DslValidateTest, RatesAndTemperaturesMustBeBoxed) {
  const auto rate = Validate(Parse(
      "(program x (params 1)\n"
      "  (state q (shape 3) (init 0) (at a) (ema (slice q a) r param0))\n"
      "  (policy (slice q)))"));
  EXPECT_TRUE(HasCode(rate, "rate"));
  const auto temp = Validate(Parse(
      "(program x (params 1) (policy (softmax [1 2 3] param0)))"));
  EXPECT_TRUE(HasCode(temp, "temperature"));
  EXPECT_TRUE(Validate(Parse("(program x (params 1) (policy (softmax [1 2 3] pos0)))")).empty());
}

TEST(DslValidateTest, CheckValidThrowsWithDiagnostics) {
  try {
    CheckValid(Parse(
        "(program x (params 1)\n"
        "  (state q (shape 3) (init 0) (at a) (ema (slice q a) r param0))\n"
        "  (policy (slice nope)))"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_GE(e.diagnostics().size(), 2u);
  }
}

TEST(DslValidateTest, NodeLimit) {
  std::string policy = "[1 1 1]";
  for (int i = 0; i < kMaxNodes; ++i) policy = "(add " + policy + " 1)";
  const Program p = Parse("(program x (params 0) (policy " + policy + "))");
  EXPECT_TRUE(HasCode(Validate(p), "limit"));
}

TEST(DslValidateTest, RankInferenceHelpers) {
  const Program p = Builtin("gpt51_sbb");
  EXPECT_EQ(p.states[1].rank, 3);
  EXPECT_EQ(Builtin("human_sbb").states[1].rank, 1);
  EXPECT_EQ(InferRank(p, p.policy), 1);
  EXPECT_TRUE(UsesPrevious(p.states[0].update));
  EXPECT_FALSE(UsesPrevious(p.policy));
  EXPECT_TRUE(UsesObservation(p.policy));
}

}  // namespace
}  // namespace irps::dsl
