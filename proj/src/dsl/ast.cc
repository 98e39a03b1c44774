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

#include "irps/dsl/ast.h"

#include <utility>

namespace irps::dsl {

std::string_view OpName(Op op) {
  switch (op) {
    case Op::kConst:
      return "const";
    case Op::kVector:
      return "vector";
    case Op::kParam:
      return "param";
    case Op::kReward:
      return "r";
    case Op::kCfReward:
      return "cfr";
    case Op::kSlice:
      return "slice";
    case Op::kOnehot:
      return "onehot";
    case Op::kAdd:
      return "add";
    case Op::kSub:
      return "sub";
    case Op::kMul:
      return "mul";
    case Op::kDiv:
      return "div";
    case Op::kEma:
      return "ema";
    case Op::kDecay:
      return "decay";
    case Op::kCounter:
      return "counter";
    case Op::kSoftmax:
      return "softmax";
    case Op::kSum:
      return "sum";
  }
  return "?";
}

std::string_view IndexVarName(IndexVar v) {
  switch (v) {
    case IndexVar::kA:
      return "a";
    case IndexVar::kAOpp:
      return "a_opp";
    case IndexVar::kPrevA:
      return "prev_a";
    case IndexVar::kPrevAOpp:
      return "prev_a_opp";
    case IndexVar::kFree:
      return "_";
  }
  return "?";
}

int Arity(Op op) {
  switch (op) {
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv:
    case Op::kDecay:
    case Op::kSoftmax:
      return 2;
    case Op::kEma:
      return 3;
    case Op::kCounter:
    case Op::kSum:
      return 1;
    default:
      return 0;
  }
}

Expr Const(double v) {
  Expr e;
  e.op = Op::kConst;
  e.value = v;
  return e;
}

Expr Vec(double x, double y, double z) {
  Expr e;
  e.op = Op::kVector;
  e.vec = {x, y, z};
  return e;
}

Expr Param(int k, ParamTransform t) {
  Expr e;
  e.op = Op::kParam;
  e.param = k;
  e.transform = t;
  return e;
}

Expr Unit(int k) { return Param(k, ParamTransform::kUnit); }
Expr Pos(int k) { return Param(k, ParamTransform::kPositive); }

Expr Reward() {
  Expr e;
  e.op = Op::kReward;
  return e;
}

Expr CfReward() {
  Expr e;
  e.op = Op::kCfReward;
  return e;
}

Expr Slice(std::string state, std::vector<IndexVar> indices) {
  Expr e;
  e.op = Op::kSlice;
  e.state = std::move(state);
  e.indices = std::move(indices);
  return e;
}

Expr Onehot(IndexVar v) {
  Expr e;
  e.op = Op::kOnehot;
  e.indices = {v};
  return e;
}

Expr Node(Op op, std::vector<Expr> args) {
  Expr e;
  e.op = op;
  e.args = std::move(args);
  return e;
}

}  // namespace irps::dsl
