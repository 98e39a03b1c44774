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

// Synthetic games between a scripted agent and roster bots.
//
// Every game owns two random streams derived from (seed, bot_id, game
// index): one for the bot, one for the agent. The bot's move for round t is
// drawn before the agent's move is known.

#ifndef IRPS_SIMULATE_H_
#define IRPS_SIMULATE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "irps/bots.h"
#include "irps/dataset.h"
#include "irps/game.h"
#include "irps/models.h"

namespace irps {

enum class AgentKind { kRandom, kOracle, kModel };

struct AgentSpec {
  AgentKind kind = AgentKind::kRandom;
  // kModel only.
  Model model = Model::Nash();
  std::vector<double> theta;

  static AgentSpec Random() { return {}; }
  static AgentSpec Oracle() { return {AgentKind::kOracle, Model::Nash(), {}}; }
  static AgentSpec FromModel(Model model, std::vector<double> theta) {
    return {AgentKind::kModel, std::move(model), std::move(theta)};
  }
  // "random", "oracle", or "model:<name>".
  std::string Label() const;
};

AgentKind AgentKindFromName(const std::string& name);

struct SimulateConfig {
  int games_per_bot = 20;
  int rounds = kDefaultRounds;
  std::uint64_t seed = 0;
  // Overrides AgentSpec::Label() in game records and the header.
  std::string agent_label;
  int jobs = 1;
};

// One game. Deterministic in (agent, bot, game_index, rounds, seed).
GameTrajectory SimulateGame(const AgentSpec& agent, const BotSpec& bot, int game_index,
                            int rounds, std::uint64_t seed, const std::string& label);

// Games against each bot in turn, bot-major order.
Dataset SimulateGames(const AgentSpec& agent, const std::vector<BotSpec>& bots,
                      const SimulateConfig& cfg);

std::string SimulatedGameId(const std::string& label, int bot_id, int game_index);

}  // namespace irps

#endif  // IRPS_SIMULATE_H_
