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

#include "irps/simulate.h"

#include <cstdio>
#include <optional>

#include "irps/error.h"
#include "irps/parallel.h"
#include "irps/rng.h"

namespace irps {

std::string AgentSpec::Label() const {
  switch (kind) {
    case AgentKind::kRandom:
      return "random";
    case AgentKind::kOracle:
      return "oracle";
    case AgentKind::kModel:
      break;
  }
  return "model:" + model.name();
}

AgentKind AgentKindFromName(const std::string& name) {
  if (name == "random") return AgentKind::kRandom;
  if (name == "oracle") return AgentKind::kOracle;
  if (name == "model") return AgentKind::kModel;
  throw Error("unknown agent '" + name + "' (expected random, oracle or model)");
}

std::string SimulatedGameId(const std::string& label, int bot_id, int game_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "-b%02d-g%03d", bot_id, game_index);
  return label + buf;
}

GameTrajectory SimulateGame(const AgentSpec& agent, const BotSpec& bot, int game_index,
                            int rounds, std::uint64_t seed, const std::string& label) {
  const std::uint64_t game_seed =
      DeriveSeed(seed, "game", static_cast<std::uint64_t>(bot.bot_id) * 1000000 + game_index);
  Rng bot_rng(DeriveSeed(game_seed, "bot"));
  Rng agent_rng(DeriveSeed(game_seed, "agent"));

  std::optional<ModelState> model_state;
  Logits logits{};
  if (agent.kind == AgentKind::kModel) {
    model_state.emplace(agent.model, agent.theta);
    logits = model_state->InitialLogits();
  }

  GameTrajectory g;
  g.game_id = SimulatedGameId(label, bot.bot_id, game_index);
  g.agent_label = label;
  g.bot_id = bot.bot_id;
  g.rounds.reserve(rounds);
  BotState state = InitialBotState(bot);
  for (int t = 0; t < rounds; ++t) {
    const Action bot_move = BotAct(bot, state, bot_rng);
    Action ego = Action::kRock;
    switch (agent.kind) {
      case AgentKind::kRandom:
        ego = agent_rng.UniformAction();
        break;
      case AgentKind::kOracle:
        ego = OracleBestResponse(bot, state, agent_rng);
        break;
      case AgentKind::kModel: {
        const auto p = Softmax(logits);
        ego = static_cast<Action>(agent_rng.Categorical(p));
        break;
      }
    }
    const RoundRecord rec = RoundRecord::Make(t, ego, bot_move);
    g.rounds.push_back(rec);
    ObserveInPlace(bot, state, bot_move, ego);
    if (model_state) logits = model_state->Observe(ego, bot_move, rec.reward);
  }
  return g;
}

Dataset SimulateGames(const AgentSpec& agent, const std::vector<BotSpec>& bots,
                      const SimulateConfig& cfg) {
  if (cfg.games_per_bot < 0 || cfg.rounds < 1) {
    throw Error("games_per_bot must be >= 0 and rounds >= 1");
  }
  const std::string label = cfg.agent_label.empty() ? agent.Label() : cfg.agent_label;
  Dataset d;
  d.header.agent_label = label;
  d.header.seed = cfg.seed;
  const int per = cfg.games_per_bot;
  d.games.resize(bots.size() * per);
  ParallelFor(static_cast<int>(d.games.size()), cfg.jobs, [&](int i) {
    d.games[i] = SimulateGame(agent, bots[i / per], i % per, cfg.rounds, cfg.seed, label);
  });
  return d;
}

}  // namespace irps
