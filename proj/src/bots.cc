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

#include "irps/bots.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>

namespace irps {
namespace {

using nlohmann::json;

int ContextLength(BotContext context) {
  switch (context) {
    case BotContext::kNone:
      return 0;
    case BotContext::kOppPrev2:
      return 2;
    default:
      return 1;
  }
}

int TargetLength(BotTarget target) {
  return target == BotTarget::kMove ? 0 : 1;
}

using History = std::deque<std::pair<Action, Action>>;

// Context cell computed from `h` (most recent round at the back).
int ContextCell(BotContext context, const History& h) {
  switch (context) {
    case BotContext::kNone:
      return 0;
    case BotContext::kOppPrev:
      return ToInt(h.back().second);
    case BotContext::kBotPrev:
      return ToInt(h.back().first);
    case BotContext::kJointPrev:
      return ToInt(h.back().first) * 3 + ToInt(h.back().second);
    case BotContext::kPrevOutcome:
      return static_cast<int>(OutcomeOf(h.back().second, h.back().first));
    case BotContext::kOppPrev2:
      return ToInt(h[h.size() - 2].second) * 3 + ToInt(h.back().second);
  }
  return 0;
}

int TargetIndex(BotTarget target, const History& h, Action opp_move) {
  switch (target) {
    case BotTarget::kMove:
      return ToInt(opp_move);
    case BotTarget::kOppTransition:
      return static_cast<int>(ClassifyTransition(h.back().second, opp_move));
    case BotTarget::kBotTransition:
      return static_cast<int>(ClassifyTransition(h.back().first, opp_move));
  }
  return 0;
}

Action PredictedMove(BotTarget target, const History& h, int k) {
  switch (target) {
    case BotTarget::kMove:
      return static_cast<Action>(k);
    case BotTarget::kOppTransition:
      return ApplyTransition(h.back().second, static_cast<TransitionKind>(k));
    case BotTarget::kBotTransition:
      return ApplyTransition(h.back().first, static_cast<TransitionKind>(k));
  }
  return Action::kRock;
}

bool InWarmup(const BotSpec& spec, const BotState& state) {
  return static_cast<int>(state.history.size()) <
         std::max(spec.warmup_needed, RequiredHistory(spec.rule));
}

std::string ContextName(BotContext c) {
  switch (c) {
    case BotContext::kNone:
      return "none";
    case BotContext::kOppPrev:
      return "opp_prev";
    case BotContext::kBotPrev:
      return "bot_prev";
    case BotContext::kJointPrev:
      return "joint_prev";
    case BotContext::kPrevOutcome:
      return "prev_outcome";
    case BotContext::kOppPrev2:
      return "opp_prev2";
  }
  return "?";
}

BotContext ContextFromName(const std::string& s) {
  for (BotContext c : {BotContext::kNone, BotContext::kOppPrev, BotContext::kBotPrev,
                       BotContext::kJointPrev, BotContext::kPrevOutcome,
                       BotContext::kOppPrev2}) {
    if (ContextName(c) == s) return c;
  }
  throw Error("unknown context '" + s + "'");
}

std::string TargetName(BotTarget t) {
  switch (t) {
    case BotTarget::kMove:
      return "move";
    case BotTarget::kOppTransition:
      return "opp_transition";
    case BotTarget::kBotTransition:
      return "bot_transition";
  }
  return "?";
}

BotTarget TargetFromName(const std::string& s) {
  for (BotTarget t : {BotTarget::kMove, BotTarget::kOppTransition,
                      BotTarget::kBotTransition}) {
    if (TargetName(t) == s) return t;
  }
  throw Error("unknown target '" + s + "'");
}

BotSpec Nonadaptive(int id, std::string name, BotRule rule) {
  BotSpec spec;
  spec.bot_id = id;
  spec.name = std::move(name);
  spec.bot_class = BotClass::kNonadaptive;
  spec.rule = rule;
  spec.noise = 0.1;
  spec.warmup_needed = RequiredHistory(rule);
  return spec;
}

BotSpec Adaptive(int id, std::string name, BotContext context, BotTarget target) {
  BotSpec spec;
  spec.bot_id = id;
  spec.name = std::move(name);
  spec.bot_class = BotClass::kAdaptive;
  spec.rule.kind = BotRule::Kind::kAdaptive;
  spec.rule.context = context;
  spec.rule.target = target;
  spec.noise = 0.0;
  spec.warmup_needed = RequiredHistory(spec.rule);
  return spec;
}

BotRule TransitionRule(BotRule::Kind kind, TransitionKind t) {
  BotRule rule;
  rule.kind = kind;
  rule.transition = t;
  return rule;
}

}  // namespace

int RequiredHistory(const BotRule& rule) {
  switch (rule.kind) {
    case BotRule::Kind::kBias:
      return 0;
    case BotRule::Kind::kSelfTransition:
    case BotRule::Kind::kOpponentTransition:
      return 1;
    case BotRule::Kind::kAdaptive:
      return std::max(ContextLength(rule.context), TargetLength(rule.target));
  }
  return 0;
}

int ContextSize(BotContext context) {
  switch (context) {
    case BotContext::kNone:
      return 1;
    case BotContext::kJointPrev:
    case BotContext::kOppPrev2:
      return 9;
    default:
      return 3;
  }
}

std::vector<BotSpec> DefaultRoster() {
  using K = BotRule::Kind;
  using T = TransitionKind;
  BotRule bias;
  bias.kind = K::kBias;
  bias.bias_action = Action::kRock;
  return {
      Nonadaptive(1, "bias_rock", bias),
      Nonadaptive(2, "self_nil", TransitionRule(K::kSelfTransition, T::kNil)),
      Nonadaptive(3, "self_positive", TransitionRule(K::kSelfTransition, T::kPositive)),
      Nonadaptive(4, "self_negative", TransitionRule(K::kSelfTransition, T::kNegative)),
      Nonadaptive(5, "opponent_nil", TransitionRule(K::kOpponentTransition, T::kNil)),
      Nonadaptive(6, "opponent_positive",
                  TransitionRule(K::kOpponentTransition, T::kPositive)),
      Nonadaptive(7, "opponent_negative",
                  TransitionRule(K::kOpponentTransition, T::kNegative)),
      Adaptive(8, "opponent_move_frequency", BotContext::kNone, BotTarget::kMove),
      Adaptive(9, "opponent_self_transitions", BotContext::kNone,
               BotTarget::kOppTransition),
      Adaptive(10, "opponent_bot_transitions", BotContext::kNone,
               BotTarget::kBotTransition),
      Adaptive(11, "opponent_move_given_opponent_prev", BotContext::kOppPrev,
               BotTarget::kMove),
      Adaptive(12, "opponent_move_given_bot_prev", BotContext::kBotPrev,
               BotTarget::kMove),
      Adaptive(13, "opponent_move_given_joint_prev", BotContext::kJointPrev,
               BotTarget::kMove),
      Adaptive(14, "opponent_transition_given_outcome", BotContext::kPrevOutcome,
               BotTarget::kOppTransition),
      Adaptive(15, "opponent_move_given_two_prev", BotContext::kOppPrev2,
               BotTarget::kMove),
  };
}

const BotSpec& FindBot(const std::vector<BotSpec>& roster, int bot_id) {
  for (const BotSpec& spec : roster) {
    if (spec.bot_id == bot_id) return spec;
  }
  throw Error("unknown bot_id " + std::to_string(bot_id));
}

json RosterToJson(const std::vector<BotSpec>& roster) {
  json out = json::array();
  for (const BotSpec& s : roster) {
    json rule;
    switch (s.rule.kind) {
      case BotRule::Kind::kBias:
        rule = {{"kind", "bias"}, {"action", ToInt(s.rule.bias_action)}};
        break;
      case BotRule::Kind::kSelfTransition:
        rule = {{"kind", "self_transition"},
                {"transition", std::string(TransitionName(s.rule.transition))}};
        break;
      case BotRule::Kind::kOpponentTransition:
        rule = {{"kind", "opponent_transition"},
                {"transition", std::string(TransitionName(s.rule.transition))}};
        break;
      case BotRule::Kind::kAdaptive:
        rule = {{"kind", "adaptive"},
                {"context", ContextName(s.rule.context)},
                {"target", TargetName(s.rule.target)}};
        break;
    }
    out.push_back({{"bot_id", s.bot_id},
                   {"name", s.name},
                   {"class", s.bot_class == BotClass::kAdaptive ? "adaptive"
                                                                : "nonadaptive"},
                   {"rule", rule},
                   {"noise", s.noise},
                   {"noise_mode", s.noise_mode == NoiseMode::kOtherTwo
                                      ? "other_two"
                                      : "uniform_all"},
                   {"warmup_needed", s.warmup_needed}});
  }
  return out;
}

std::vector<BotSpec> RosterFromJson(const json& j) {
  if (!j.is_array()) throw SchemaError("roster must be a JSON array");
  std::vector<BotSpec> roster;
  std::set<int> ids;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    const std::string where = "roster entry " + std::to_string(i) + ": ";
    try {
      BotSpec s;
      s.bot_id = e.at("bot_id").get<int>();
      if (s.bot_id < 1) throw Error("bot_id must be positive");
      if (!ids.insert(s.bot_id).second) throw Error("duplicate bot_id");
      s.name = e.value("name", "bot_" + std::to_string(s.bot_id));
      const std::string cls = e.at("class").get<std::string>();
      if (cls == "adaptive") {
        s.bot_class = BotClass::kAdaptive;
      } else if (cls == "nonadaptive") {
        s.bot_class = BotClass::kNonadaptive;
      } else {
        throw Error("class must be 'adaptive' or 'nonadaptive'");
      }
      const json& rule = e.at("rule");
      const std::string kind = rule.at("kind").get<std::string>();
      if (kind == "bias") {
        s.rule.kind = BotRule::Kind::kBias;
        s.rule.bias_action = ActionFromInt(rule.at("action").get<int>());
      } else if (kind == "self_transition" || kind == "opponent_transition") {
        s.rule.kind = kind == "self_transition" ? BotRule::Kind::kSelfTransition
                                                : BotRule::Kind::kOpponentTransition;
        s.rule.transition = TransitionFromName(rule.at("transition").get<std::string>());
      } else if (kind == "adaptive") {
        s.rule.kind = BotRule::Kind::kAdaptive;
        s.rule.context = ContextFromName(rule.at("context").get<std::string>());
        s.rule.target = TargetFromName(rule.at("target").get<std::string>());
      } else {
        throw Error("unknown rule kind '" + kind + "'");
      }
      if ((s.rule.kind == BotRule::Kind::kAdaptive) !=
          (s.bot_class == BotClass::kAdaptive)) {
        throw Error("rule kind does not match class");
      }
      s.noise = e.at("noise").get<double>();
      if (!(s.noise >= 0.0 && s.noise <= 1.0)) throw Error("noise must be in [0,1]");
      const std::string mode = e.value("noise_mode", "uniform_all");
      if (mode == "other_two") {
        s.noise_mode = NoiseMode::kOtherTwo;
      } else if (mode != "uniform_all") {
        throw Error("noise_mode must be 'uniform_all' or 'other_two'");
      }
      s.warmup_needed = e.at("warmup_needed").get<int>();
      if (s.warmup_needed < RequiredHistory(s.rule)) {
        throw Error("warmup_needed smaller than the rule's history requirement (" +
                    std::to_string(RequiredHistory(s.rule)) + ")");
      }
      if (s.warmup_needed > BotState::kMaxHistory) {
        throw Error("warmup_needed exceeds the history bound");
      }
      roster.push_back(std::move(s));
    } catch (const json::exception& ex) {
      throw SchemaError(where + ex.what());
    } catch (const Error& ex) {
      throw SchemaError(where + ex.what());
    }
  }
  return roster;
}

std::vector<BotSpec> LoadRoster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open roster file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& ex) {
    throw SchemaError(path.string() + ": " + ex.what());
  }
  return RosterFromJson(j);
}

BotState InitialBotState(const BotSpec& spec) {
  BotState state;
  if (spec.rule.kind == BotRule::Kind::kAdaptive) {
    state.counts.assign(ContextSize(spec.rule.context) * kNumActions, 0);
  }
  return state;
}

std::vector<Action> RuleMoves(const BotSpec& spec, const BotState& state) {
  if (InWarmup(spec, state)) return {};
  const auto& h = state.history;
  switch (spec.rule.kind) {
    case BotRule::Kind::kBias:
      return {spec.rule.bias_action};
    case BotRule::Kind::kSelfTransition:
      return {ApplyTransition(h.back().first, spec.rule.transition)};
    case BotRule::Kind::kOpponentTransition:
      return {ApplyTransition(h.back().second, spec.rule.transition)};
    case BotRule::Kind::kAdaptive:
      break;
  }
  const int cell = ContextCell(spec.rule.context, h);
  const int* row = state.counts.data() + cell * kNumActions;
  const int best = *std::max_element(row, row + kNumActions);
  std::vector<Action> moves;
  for (int k = 0; k < kNumActions; ++k) {
    if (row[k] == best) moves.push_back(Beats(PredictedMove(spec.rule.target, h, k)));
  }
  return moves;
}

std::array<double, kNumActions> BotPolicy(const BotSpec& spec,
                                          const BotState& state) {
  std::array<double, kNumActions> p{};
  const std::vector<Action> moves = RuleMoves(spec, state);
  if (moves.empty()) {
    p.fill(1.0 / kNumActions);
    return p;
  }
  const double rule_mass = 1.0 - spec.noise;
  for (Action m : moves) p[ToInt(m)] += rule_mass / moves.size();
  if (spec.noise > 0.0) {
    // Noise is only defined for single-move rules.
    const Action m = moves.front();
    for (int k = 0; k < kNumActions; ++k) {
      if (spec.noise_mode == NoiseMode::kUniformAll) {
        p[k] += spec.noise / kNumActions;
      } else if (k != ToInt(m)) {
        p[k] += spec.noise / (kNumActions - 1);
      }
    }
  }
  return p;
}

Action BotAct(const BotSpec& spec, const BotState& state, Rng& rng) {
  const std::vector<Action> moves = RuleMoves(spec, state);
  if (moves.empty()) return rng.UniformAction();
  if (spec.noise > 0.0 && rng.Uniform() < spec.noise) {
    if (spec.noise_mode == NoiseMode::kUniformAll) return rng.UniformAction();
    const int shift = 1 + rng.UniformInt(kNumActions - 1);
    return static_cast<Action>((ToInt(moves.front()) + shift) % kNumActions);
  }
  if (moves.size() == 1) return moves.front();
  return moves[rng.UniformInt(static_cast<int>(moves.size()))];
}

void ObserveInPlace(const BotSpec& spec, BotState& state, Action bot_move,
                    Action opp_move) {
  if (spec.rule.kind == BotRule::Kind::kAdaptive &&
      static_cast<int>(state.history.size()) >= RequiredHistory(spec.rule)) {
    const int cell = ContextCell(spec.rule.context, state.history);
    const int target = TargetIndex(spec.rule.target, state.history, opp_move);
    ++state.counts[cell * kNumActions + target];
  }
  state.history.emplace_back(bot_move, opp_move);
  while (static_cast<int>(state.history.size()) > BotState::kMaxHistory) {
    state.history.pop_front();
  }
  ++state.rounds_seen;
}

BotState BotObserve(const BotSpec& spec, BotState state, Action bot_move,
                    Action opp_move) {
  ObserveInPlace(spec, state, bot_move, opp_move);
  return state;
}

int CountAt(const BotSpec& spec, const BotState& state, int context_cell,
            int target) {
  if (spec.rule.kind != BotRule::Kind::kAdaptive) {
    throw ContractViolation("CountAt on a nonadaptive bot");
  }
  return state.counts.at(context_cell * kNumActions + target);
}

Action OracleBestResponse(const BotSpec& spec, const BotState& state, Rng& rng) {
  const auto p = BotPolicy(spec, state);
  std::array<double, kNumActions> ev{};
  for (int j = 0; j < kNumActions; ++j) {
    for (int k = 0; k < kNumActions; ++k) {
      ev[j] += p[k] * EgoReward(static_cast<Action>(j), static_cast<Action>(k));
    }
  }
  const double best = *std::max_element(ev.begin(), ev.end());
  std::vector<Action> argmax;
  for (int j = 0; j < kNumActions; ++j) {
    if (ev[j] >= best - 1e-12) argmax.push_back(static_cast<Action>(j));
  }
  if (argmax.size() == 1) return argmax.front();
  return argmax[rng.UniformInt(static_cast<int>(argmax.size()))];
}

}  // namespace irps
