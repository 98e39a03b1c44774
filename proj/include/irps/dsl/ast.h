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

// Behavioral-model programs.
//
// A program declares up to a handful of action-indexed state tensors (rank
// 0-3, every axis of size 3) and a policy expression producing three logits.
// After each observed round (a, a_opp, r) every state's `update` expression
// computes the new value of the slice addressed by its `at` index spec, all
// reading pre-update values; then the policy is evaluated.
//
// Index variables:
//   a, a_opp            the round just observed
//   prev_a, prev_a_opp  the round before it (undefined on the first round;
//                       updates that need them are skipped and a policy that
//                       needs them yields uniform logits)
//   _                   a free axis
//
// Parameters appear as leaves: paramK (raw), unitK = sigmoid(thetaK) in
// (0, 1), posK = softplus(thetaK) > 0.

#ifndef IRPS_DSL_AST_H_
#define IRPS_DSL_AST_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace irps::dsl {

inline constexpr int kMaxParams = 10;
inline constexpr int kMaxRank = 3;

enum class Op : std::uint8_t {
  // Leaves.
  kConst,
  kVector,
  kParam,
  kReward,    // r
  kCfReward,  // cfr[j] = payoff(j, a_opp) for the ego seat
  // Interior nodes.
  kSlice,
  kOnehot,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kEma,      // (1 - rate) * old + rate * new
  kDecay,    // rate * old
  kCounter,  // out[k] = v[k - 1 mod 3] along the last axis
  kSoftmax,  // softmax(temp * v) along the last axis
  kSum,      // sum along the last axis
};

enum class IndexVar : std::uint8_t { kA, kAOpp, kPrevA, kPrevAOpp, kFree };

enum class ParamTransform : std::uint8_t { kRaw, kUnit, kPositive };

struct Expr {
  Op op = Op::kConst;
  double value = 0.0;
  std::array<double, 3> vec{};
  int param = 0;
  ParamTransform transform = ParamTransform::kRaw;
  std::string state;
  std::vector<IndexVar> indices;
  std::vector<Expr> args;

  bool IsLeaf() const { return op <= Op::kCfReward; }
  bool operator==(const Expr& other) const = default;
};

struct StateDecl {
  std::string name;
  int rank = 0;
  double init = 0.0;
  std::vector<IndexVar> at;
  Expr update;

  bool operator==(const StateDecl& other) const = default;
};

struct Program {
  std::string name;
  int param_count = 0;
  std::vector<StateDecl> states;
  Expr policy;

  bool operator==(const Program& other) const = default;
};

std::string_view OpName(Op op);
std::string_view IndexVarName(IndexVar v);
// Number of child expressions an interior op takes; 0 for leaves, slice and
// onehot.
int Arity(Op op);

// Leaf and node builders, mostly for tests, builtins and the mutator.
Expr Const(double v);
Expr Vec(double x, double y, double z);
Expr Param(int k, ParamTransform t = ParamTransform::kRaw);
Expr Unit(int k);
Expr Pos(int k);
Expr Reward();
Expr CfReward();
Expr Slice(std::string state, std::vector<IndexVar> indices = {});
Expr Onehot(IndexVar v);
Expr Node(Op op, std::vector<Expr> args);

}  // namespace irps::dsl

#endif  // IRPS_DSL_AST_H_
