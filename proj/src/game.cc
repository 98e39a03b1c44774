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

#include "irps/game.h"

#include <string>

namespace irps {

Action ActionFromInt(int value) {
  if (value < 0 || value >= kNumActions) {
    throw Error("invalid action " + std::to_string(value) +
                " (expected 0=Rock, 1=Paper, 2=Scissors)");
  }
  return static_cast<Action>(value);
}

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kRock:
      return "Rock";
    case Action::kPaper:
      return "Paper";
    case Action::kScissors:
      return "Scissors";
  }
  return "?";
}

std::string_view OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kWin:
      return "win";
    case Outcome::kTie:
      return "tie";
    case Outcome::kLoss:
      return "loss";
  }
  return "?";
}

std::string_view TransitionName(TransitionKind k) {
  switch (k) {
    case TransitionKind::kPositive:
      return "positive";
    case TransitionKind::kNegative:
      return "negative";
    case TransitionKind::kNil:
      return "nil";
  }
  return "?";
}

TransitionKind TransitionFromName(std::string_view name) {
  if (name == "positive") return TransitionKind::kPositive;
  if (name == "negative") return TransitionKind::kNegative;
  if (name == "nil") return TransitionKind::kNil;
  throw Error("unknown transition kind '" + std::string(name) + "'");
}

void ValidateTrajectory(const GameTrajectory& game) {
  for (int i = 0; i < game.T(); ++i) {
    const RoundRecord& r = game.rounds[i];
    if (r.t != i) {
      throw Error("game '" + game.game_id + "' round " + std::to_string(i) +
                  ": expected t=" + std::to_string(i) + ", found t=" +
                  std::to_string(r.t));
    }
    if (r.reward != EgoReward(r.ego, r.opp)) {
      throw Error("game '" + game.game_id + "' round " + std::to_string(i) +
                  ": reward " + std::to_string(r.reward) +
                  " inconsistent with moves (" + std::string(ActionName(r.ego)) +
                  ", " + std::string(ActionName(r.opp)) + ")");
    }
  }
  if (game.padded_from && (*game.padded_from < 0 || *game.padded_from > game.T())) {
    throw Error("game '" + game.game_id + "': padded_from out of range");
  }
}

}  // namespace irps
