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


#include <gtest/gtest.h>

#include <cmath>

#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"
#include "irps/models.h"
#include "irps/rng.h"

namespace irps {
namespace {

Model Prog(const std::string& text) { return Model::FromProgram(dsl::Parse(text)); }

int Argmax(const Logits& l) {
  return static_cast<int>(std::max_element(l.begin(), l.end()) - l.begin());
}

TEST(InterpreterTest, NashIsUniformEveryRound) {
  const Model m = Model::FromProgram(dsl::Builtin("nash"));
  ModelState s(m, {});
  Rng rng(1);
  auto p = Softmax(s.InitialLogits());
  for (double v : p) EXPECT_NEAR(v, 1.0 / 3, 1e-15);
  for (int t = 0; t < 20; ++t) {
    const Action a = rng.UniformAction(), o = rng.UniformAction();
    p = Softmax(s.Observe(a, o, EgoReward(a, o)));
    for (double v : p) EXPECT_NEAR(v, 1.0 / 3, 1e-15);
  }
}

TEST(InterpreterTest, FrequencyCounterPicksPaperAfterRocks) {
  const Model m = Prog(
      "(program f (params 0)\n"
      "  (state opp (shape 3) (init 0) (at) (add (slice opp) (onehot a_opp)))\n"
      "  (policy (counter (slice opp))))");
  ModelState s(m, {});
  Logits l{};
  for (int t = 0; t < 5; ++t) l = s.Observe(Action::kScissors, Action::kRock, 3);
  EXPECT_EQ(Argmax(l), ToInt(Action::kPaper));
  EXPECT_DOUBLE_EQ(l[ToInt(Action::kPaper)], 5.0);
}

TEST(InterpreterTest, QVectorEmaByHand) {
  const Model m = Prog(
      "(program q (params 0)\n"
      "  (state q (shape 3) (init 0) (at a) (ema (slice q a) r 0.5))\n"
      "  (policy (slice q)))");
  ModelState s(m, {});
  Logits l = s.Observe(Action::kRock, Action::kScissors, 3);
  EXPECT_DOUBLE_EQ(l[0], 1.5);
  l = s.Observe(Action::kRock, Action::kScissors, 3);
  EXPECT_DOUBLE_EQ(l[0], 2.25);
  EXPECT_DOUBLE_EQ(l[1], 0.0);
}

TEST(InterpreterTest, UpdatesReadPreUpdateValues) {
  // b copies a's old value, so it lags one round behind.
  const Model m = Prog(
      "(program lag (params 0)\n"
      "  (state x (shape) (init 0) (at) (add (slice x) 1))\n"
      "  (state y (shape) (init 0) (at) (slice x))\n"
      "  (policy (mul (slice y) [1 0 0])))");
  ModelState s(m, {});
  EXPECT_DOUBLE_EQ(s.Observe(Action::kRock, Action::kRock, 0)[0], 0.0);
  EXPECT_DOUBLE_EQ(s.Observe(Action::kRock, Action::kRock, 0)[0], 1.0);
  EXPECT_DOUBLE_EQ(s.Observe(Action::kRock, Action::kRock, 0)[0], 2.0);
}

TEST(InterpreterTest, CounterfactualRewardsFromEgoSeat) {
  const Model m = Prog("(program c (params 0) (policy (mul cfr [1 1 1])))");
  ModelState s(m, {});
  const Logits l = s.Observe(Action::kRock, Action::kPaper, -1);
  EXPECT_DOUBLE_EQ(l[0], EgoReward(Action::kRock, Action::kPaper));
  EXPECT_DOUBLE_EQ(l[1], EgoReward(Action::kPaper, Action::kPaper));
  EXPECT_DOUBLE_EQ(l[2], EgoReward(Action::kScissors, Action::kPaper));
}

double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Hand-written version of the gptoss_sbb built-in.
struct GptossOracle {
  std::array<double, 3> q{}, opp{};
  std::vector<double> th;

  Logits Observe(int a, int o, double r) {
    const double rate = Sig(th[0]);
    const double decay = Sig(th[2]);
    q[a] = (1 - rate) * q[a] + rate * r;
    for (double& v : opp) v *= decay;
    opp[o] += 1;
    const double total = opp[0] + opp[1] + opp[2];
    Logits l{};
    for (int k = 0; k < 3; ++k) {
      const double freq = opp[(k + 2) % 3] / (std::abs(total) + 1e-8);
      l[k] = th[1] * q[k] + th[3] * freq + th[4] * (k == a ? 1.0 : 0.0);
    }
    return l;
  }
};

TEST(InterpreterTest, GptossMatchesHandOracle) {
  const Model m = Model::FromProgram(dsl::Builtin("gptoss_sbb"));
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> theta(5);
    for (double& v : theta) v = rng.Normal();
    ModelState s(m, theta);
    GptossOracle oracle{{}, {}, theta};
    for (int t = 0; t < 60; ++t) {
      const Action a = rng.UniformAction(), o = rng.UniformAction();
      const Logits got = s.Observe(a, o, EgoReward(a, o));
      const Logits want = oracle.Observe(ToInt(a), ToInt(o), EgoReward(a, o));
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
    }
  }
}

TEST(InterpreterTest, StepIsPureAndDistributionsNormalize) {
  Rng rng(8);
  for (const std::string& name : dsl::BuiltinNames()) {
    const Model m = Model::FromProgram(dsl::Builtin(name));
    const std::vector<double> theta = dsl::BuiltinReferenceTheta(name);
    ModelState h(m, theta);
    auto p0 = Softmax(h.InitialLogits());
    EXPECT_NEAR(p0[0] + p0[1] + p0[2], 1.0, 1e-12);
    for (int t = 0; t < 30; ++t) {
      const Action a = rng.UniformAction(), o = rng.UniformAction();
      auto [l1, h1] = ModelStep(m, theta, a, o, EgoReward(a, o), h);
      auto [l2, h2] = ModelStep(m, theta, a, o, EgoReward(a, o), h);
      EXPECT_EQ(l1, l2);
      const auto p = Softmax(l1);
      EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
      h = h1;
    }
  }
}

TEST(InterpreterTest, SoftmaxIsShiftInvariant) {
  const Logits l{0.3, -1.2, 2.0};
  const Logits shifted{100.3, 98.8, 102.0};
  const auto a = Softmax(l), b = Softmax(shifted);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
}

}  // namespace
}  // namespace irps
