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

// Fixed-policy opponents. Bots 1-7 follow a transition rule with probability
// 1 - noise; bots 8-15 count the opponent's sequential patterns and play the
// counter to the most likely next move.
//
// Throughout this header "opponent" means the bot's opponent, i.e. the ego
// agent whose behavior is being studied.

#ifndef IRPS_BOTS_H_
#define IRPS_BOTS_H_

#include <array>
#include <deque>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "irps/game.h"
#include "irps/rng.h"
#include "json.hpp"

namespace irps {

enum class BotClass { kNonadaptive, kAdaptive };

// Where the 10% noise mass goes for nonadaptive bots.
enum class NoiseMode { kUniformAll, kOtherTwo };

// What an adaptive bot conditions its counts on.
enum class BotContext {
  kNone,         // 1 cell
  kOppPrev,      // opponent's previous move, 3 cells
  kBotPrev,      // bot's own previous move, 3 cells
  kJointPrev,    // (bot previous, opponent previous), 9 cells
  kPrevOutcome,  // previous outcome from the opponent's side, 3 cells
  kOppPrev2,     // opponent's previous two moves, 9 cells
};

// What an adaptive bot counts inside each context cell.
enum class BotTarget {
  kMove,           // the opponent's move
  kOppTransition,  // opponent move relative to the opponent's previous move
  kBotTransition,  // opponent move relative to the bot's previous move
};

struct BotRule {
  enum class Kind { kBias, kSelfTransition, kOpponentTransition, kAdaptive };
  Kind kind = Kind::kBias;
  Action bias_action = Action::kRock;                  // kBias
  TransitionKind transition = TransitionKind::kNil;    // k*Transition
  BotContext context = BotContext::kNone;              // kAdaptive
  BotTarget target = BotTarget::kMove;                 // kAdaptive
};

struct BotSpec {
  int bot_id = 0;
  std::string name;
  BotClass bot_class = BotClass::kNonadaptive;
  BotRule rule;
  double noise = 0.0;
  NoiseMode noise_mode = NoiseMode::kUniformAll;
  int warmup_needed = 0;
};

struct BotState {
  // (bot action, opponent action), oldest first; holds at most kMaxHistory.
  std::deque<std::pair<Action, Action>> history;
  // Adaptive bots only: [context cell][target] counts, row-major.
  std::vector<int> counts;
  int rounds_seen = 0;

  static constexpr int kMaxHistory = 4;
};

// Rounds of history needed before a rule's features are defined.
int RequiredHistory(const BotRule& rule);
int ContextSize(BotContext context);

std::vector<BotSpec> DefaultRoster();
const BotSpec& FindBot(const std::vector<BotSpec>& roster, int bot_id);

nlohmann::json RosterToJson(const std::vector<BotSpec>& roster);
// Validates the schema; throws SchemaError with the offending entry.
std::vector<BotSpec> RosterFromJson(const nlohmann::json& j);
std::vector<BotSpec> LoadRoster(const std::filesystem::path& path);

BotState InitialBotState(const BotSpec& spec);

// The bot's move distribution for the coming round, before any randomness.
std::array<double, kNumActions> BotPolicy(const BotSpec& spec,
                                          const BotState& state);

// Moves the rule prescribes this round; empty during warmup. For adaptive
// bots this is the set of counter moves to every argmax prediction.
std::vector<Action> RuleMoves(const BotSpec& spec, const BotState& state);

Action BotAct(const BotSpec& spec, const BotState& state, Rng& rng);

void ObserveInPlace(const BotSpec& spec, BotState& state, Action bot_move,
                    Action opp_move);
BotState BotObserve(const BotSpec& spec, BotState state, Action bot_move,
                    Action opp_move);

// Count cell accessor for adaptive bots.
int CountAt(const BotSpec& spec, const BotState& state, int context_cell,
            int target);

// Best response to the bot's policy this round; ties (including the whole
// warmup period) are broken uniformly at random.
Action OracleBestResponse(const BotSpec& spec, const BotState& state, Rng& rng);

}  // namespace irps

#endif  // IRPS_BOTS_H_
