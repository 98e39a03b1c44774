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


#include "irps/fitting.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "irps/dsl/builtins.h"
#include "irps/objective.h"
#include "irps/rng.h"
#include "irps/simulate.h"
#include "test_util.h"

namespace irps {
namespace {

// Independent NLL oracle: step the model round by round and sum the
// negative log probabilities of rounds 1..T-1.
double NllOracle(const Model& m, const std::vector<double>& theta,
                 const std::vector<GameTrajectory>& games) {
  double total = 0.0;
  for (const GameTrajectory& g : games) {
    ModelState s(m, theta);
    for (int t = 0; t + 1 < g.T(); ++t) {
      const RoundRecord& r = g.rounds[t];
      const auto p = Softmax(s.Observe(r.ego, r.opp, r.reward));
      total -= std::log(p[ToInt(g.rounds[t + 1].ego)]);
    }
  }
  return total;
}

TEST(ObjectiveTest, NllMatchesSteppedOracle) {
  const std::vector<GameTrajectory> games = testing::RandomGames(3, 40, 2);
  Rng rng(1);
  for (const std::string spec : {"nash", "csewa", "builtin:human_sbb", "builtin:gemini_sbb"}) {
    const Model m = Model::FromSpec(spec);
    std::vector<double> theta(m.param_count());
    for (double& v : theta) v = rng.Normal();
    const NllValue v = Nll(m, theta, games);
    EXPECT_NEAR(v.nll, NllOracle(m, theta, games), 1e-9) << spec;
    EXPECT_EQ(v.predictions, 3 * 39);
  }
}

TEST(ObjectiveTest, NashNllIsLogThreePerPrediction) {
  const std::vector<GameTrajectory> games = testing::RandomGames(5, 30, 3);
  const NllValue v = Nll(Model::Nash(), {}, games);
  EXPECT_NEAR(v.nll, v.predictions * std::log(3.0), 1e-9);
}

TEST(ObjectiveTest, PaddingMaskSkipsPaddedTargets) {
  std::vector<GameTrajectory> games = testing::RandomGames(1, 30, 4);
  games[0].padded_from = 20;
  ScoreOptions opts;
  opts.mask_padding = true;
  EXPECT_EQ(Nll(Model::Nash(), {}, games, opts).predictions, 19);
  EXPECT_EQ(Nll(Model::Nash(), {}, games).predictions, 29);
}

// Central differences at step 1e-5 against the forward-mode gradient.
TEST(ObjectiveTest, GradientsMatchFiniteDifferences) {
  Rng rng(9);
  std::vector<std::string> specs = {"csewa"};
  for (const std::string& n : dsl::BuiltinNames()) specs.push_back("builtin:" + n);
  for (const std::string& spec : specs) {
    const Model m = Model::FromSpec(spec);
    const std::vector<GameTrajectory> games = testing::RandomGames(2, 50, rng.UniformInt(1000));
    std::vector<double> theta(m.param_count());
    for (double& v : theta) v = 0.5 * rng.Normal();
    const NllGrad g = NllAndGradient(m, theta, games);
    EXPECT_NEAR(g.nll, Nll(m, theta, games).nll, 1e-9);
    for (int i = 0; i < m.param_count(); ++i) {
      std::vector<double> hi = theta, lo = theta;
      hi[i] += 1e-5;
      lo[i] -= 1e-5;
      const double fd = (Nll(m, hi, games).nll - Nll(m, lo, games).nll) / 2e-5;
      EXPECT_LE(std::abs(fd - g.grad[i]), 1e-4 * std::max(1.0, std::abs(fd))) << spec << " " << i;
    }
  }
}

TEST(AdaBeliefTest, MinimizesAQuadratic) {
  FitConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.max_steps = 5000;
  cfg.rel_tol = 1e-6;
  const GradientFn fn = [](std::span<const double> x) {
    const double a = x[0] - 2.0, b = x[1] + 1.0;
    return std::make_pair(a * a + 3 * b * b + 1.0, std::vector<double>{2 * a, 6 * b});
  };
  const MinimizeResult r = AdaBeliefMinimize(fn, {0.0, 0.0}, cfg);
  EXPECT_NEAR(r.theta[0], 2.0, 1e-2);
  EXPECT_NEAR(r.theta[1], -1.0, 1e-2);
  EXPECT_NEAR(r.value, 1.0, 1e-3);
  EXPECT_FALSE(r.diverged);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_TRUE(std::isfinite(r.trace[i]));
}

TEST(FitTest, NashHasNothingToFit) {
  const std::vector<GameTrajectory> games = testing::RandomGames(4, 30, 5);
  const FitResult r = Fit(Model::Nash(), games, FitConfig{});
  EXPECT_TRUE(r.theta.empty());
  EXPECT_NEAR(r.nll, r.predictions * std::log(3.0), 1e-9);
}

TEST(FitTest, DeterministicForFixedSeed) {
  const std::vector<GameTrajectory> games = testing::RandomGames(4, 60, 6);
  FitConfig cfg;
  cfg.restarts = 2;
  cfg.max_steps = 200;
  cfg.seed = 42;
  const Model m = Model::FromSpec("builtin:gptoss_sbb");
  const FitResult a = Fit(m, games, cfg);
  cfg.jobs = 2;
  const FitResult b = Fit(m, games, cfg);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.nll, b.nll);
  EXPECT_EQ(a.restarts.size(), 2u);
}

TEST(FitTest, BeatsNashOnDataFromAStickyAgent) {
  // Games from gptoss_sbb at its reference parameters carry structure a fit
  // should find.
  const Model m = Model::FromSpec("builtin:gptoss_sbb");
  SimulateConfig sc;
  sc.games_per_bot = 1;
  sc.rounds = 150;
  sc.seed = 3;
  const std::vector<BotSpec> bots = {FindBot(DefaultRoster(), 1), FindBot(DefaultRoster(), 8)};
  const Dataset data = SimulateGames(
      AgentSpec::FromModel(m, dsl::BuiltinReferenceTheta("gptoss_sbb")), bots, sc);
  FitConfig cfg;
  cfg.restarts = 2;
  cfg.max_steps = 1500;
  cfg.seed = 1;
  const FitResult r = Fit(m, data.games, cfg);
  const double nash = Nll(Model::Nash(), {}, data.games).nll;
  EXPECT_LT(r.nll, nash - 10.0);
  const double at_truth = Nll(m, dsl::BuiltinReferenceTheta("gptoss_sbb"), data.games).nll;
  EXPECT_LT(r.nll, at_truth + 5.0);
}

TEST(FitTest, ConfigJsonRoundTrip) {
  FitConfig cfg;
  cfg.restarts = 3;
  cfg.learning_rate = 0.02;
  cfg.mask_padding = true;
  const FitConfig back = FitConfigFromJson(FitConfigToJson(cfg));
  EXPECT_EQ(back.restarts, 3);
  EXPECT_DOUBLE_EQ(back.learning_rate, 0.02);
  EXPECT_TRUE(back.mask_padding);
}

}  // namespace
}  // namespace irps
