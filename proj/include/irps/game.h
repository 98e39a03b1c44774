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

#ifndef IRPS_GAME_H_
#define IRPS_GAME_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irps/error.h"

namespace irps {

inline constexpr int kNumActions = 3;
inline constexpr int kDefaultRounds = 300;

// Rock, Paper and Scissors are 0, 1 and 2 everywhere, including on disk.
enum class Action : std::uint8_t { kRock = 0, kPaper = 1, kScissors = 2 };

enum class Outcome : std::uint8_t { kWin = 0, kTie = 1, kLoss = 2 };

enum class TransitionKind : std::uint8_t { kPositive, kNegative, kNil };

inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kRock, Action::kPaper, Action::kScissors};

constexpr int ToInt(Action a) { return static_cast<int>(a); }

// Throws irps::Error if `value` is outside {0, 1, 2}.
Action ActionFromInt(int value);

// The unique action that defeats `a`.
constexpr Action Beats(Action a) {
  return static_cast<Action>((ToInt(a) + 1) % kNumActions);
}

struct Payoff {
  int ego = 0;
  int opp = 0;
  friend bool operator==(const Payoff&, const Payoff&) = default;
};

// 3 for a win, 0 for a tie, -1 for a loss.
constexpr Payoff PayoffOf(Action ego, Action opp) {
  if (ego == opp) return {0, 0};
  if (ego == Beats(opp)) return {3, -1};
  return {-1, 3};
}

constexpr int EgoReward(Action ego, Action opp) { return PayoffOf(ego, opp).ego; }

constexpr Outcome OutcomeOf(Action ego, Action opp) {
  switch (EgoReward(ego, opp)) {
    case 3:
      return Outcome::kWin;
    case 0:
      return Outcome::kTie;
    default:
      return Outcome::kLoss;
  }
}

constexpr Action ApplyTransition(Action from, TransitionKind kind) {
  switch (kind) {
    case TransitionKind::kPositive:
      return static_cast<Action>((ToInt(from) + 1) % kNumActions);
    case TransitionKind::kNegative:
      return static_cast<Action>((ToInt(from) + kNumActions - 1) % kNumActions);
    case TransitionKind::kNil:
      break;
  }
  return from;
}

constexpr TransitionKind ClassifyTransition(Action prev, Action next) {
  const int diff = (ToInt(next) - ToInt(prev) + kNumActions) % kNumActions;
  if (diff == 1) return TransitionKind::kPositive;
  if (diff == 2) return TransitionKind::kNegative;
  return TransitionKind::kNil;
}

std::string_view ActionName(Action a);
std::string_view OutcomeName(Outcome o);
std::string_view TransitionName(TransitionKind k);
// Accepts "positive", "negative" or "nil".
TransitionKind TransitionFromName(std::string_view name);

struct RoundRecord {
  int t = 0;
  Action ego = Action::kRock;
  Action opp = Action::kRock;
  int reward = 0;

  static RoundRecord Make(int t, Action ego, Action opp) {
    return {t, ego, opp, EgoReward(ego, opp)};
  }
  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct GameTrajectory {
  std::string game_id;
  std::string agent_label;
  int bot_id = 0;
  std::vector<RoundRecord> rounds;
  // Number of recorded rounds before padding; unset when the game was
  // never padded.
  std::optional<int> padded_from;

  int T() const { return static_cast<int>(rounds.size()); }
  friend bool operator==(const GameTrajectory&, const GameTrajectory&) = default;
};

// Throws irps::Error naming the game and round when round indices have gaps
// or a reward disagrees with the payoff table.
void ValidateTrajectory(const GameTrajectory& game);

}  // namespace irps

#endif  // IRPS_GAME_H_
