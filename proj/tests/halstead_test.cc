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


#include "irps/dsl/halstead.h"

#include <gtest/gtest.h>

#include <cmath>

#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"

namespace irps::dsl {
namespace {

TEST(HalsteadTest, WorkedCounts) {
  const HalsteadReport r = HalsteadFromCounts(2, 3, 4, 5);
  EXPECT_NEAR(r.volume, 9 * std::log2(5.0), 1e-12);
  EXPECT_NEAR(r.volume, 20.897, 1e-3);
  EXPECT_NEAR(r.difficulty, 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.effort, 34.829, 1e-3);
}

TEST(HalsteadTest, ProgramWithWorkedCounts) {
  // Operators: add x2, mul x2.  Operands: param0 x2, r x2, cfr x1.
  const Program p = Parse("(program w (params 1) (policy (add (mul param0 r) (add (mul r cfr) param0))))");
  const HalsteadReport r = Halstead(p);
  EXPECT_EQ(r.eta1, 2);
  EXPECT_EQ(r.eta2, 3);
  EXPECT_EQ(r.n1, 4);
  EXPECT_EQ(r.n2, 5);
  EXPECT_NEAR(r.effort, 34.829, 1e-3);
}

TEST(HalsteadTest, ConstantPolicyIsDegenerate) {
  const HalsteadReport r = Halstead(Builtin("nash"));
  EXPECT_EQ(r.eta1, 0);
  EXPECT_EQ(r.difficulty, 0.0);
  EXPECT_EQ(r.effort, 0.0);
}

TEST(HalsteadTest, BuiltinOrdering) {
  const double gptoss = Halstead(Builtin("gptoss_sbb")).effort;
  const double human = Halstead(Builtin("human_sbb")).effort;
  const double gpt51 = Halstead(Builtin("gpt51_sbb")).effort;
  EXPECT_LT(gptoss, human);
  EXPECT_LT(human, gpt51);
}

TEST(HalsteadTest, DuplicatingASubexpressionRaisesEffort) {
  const Program a = Parse("(program d (params 1) (policy (mul param0 (add cfr [1 0 0]))))");
  const Program b = Parse(
      "(program d (params 1) (policy (mul param0 (add (add cfr [1 0 0]) (add cfr [1 0 0])))))");
  EXPECT_EQ(Halstead(a).eta1, Halstead(b).eta1);
  EXPECT_EQ(Halstead(a).eta2, Halstead(b).eta2);
  EXPECT_GT(Halstead(b).effort, Halstead(a).effort);
}

TEST(HalsteadTest, DependsOnlyOnCanonicalText) {
  for (const std::string& name : BuiltinNames()) {
    const Program p = Builtin(name);
    Program renamed = Parse(Serialize(p));
    renamed.name = "other";
    EXPECT_EQ(Halstead(p).effort, Halstead(renamed).effort);
  }
}

}  // namespace
}  // namespace irps::dsl
