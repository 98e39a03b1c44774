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

#include "irps/dsl/halstead.h"

#include <cmath>

#include "irps/dsl/text.h"

namespace irps::dsl {
namespace {

void CountExpr(const Expr& e, HalsteadTokens* t) {
  if (e.IsLeaf()) {
    t->operands[SerializeExpr(e)]++;
    return;
  }
  t->operators[std::string(OpName(e.op))]++;
  if (e.op == Op::kSlice) t->operands[e.state]++;
  for (IndexVar v : e.indices) t->operands[std::string(IndexVarName(v))]++;
  for (const Expr& a : e.args) CountExpr(a, t);
}

}  // namespace

HalsteadReport HalsteadFromCounts(int eta1, int eta2, int n1, int n2) {
  HalsteadReport r;
  r.eta1 = eta1;
  r.eta2 = eta2;
  r.n1 = n1;
  r.n2 = n2;
  const int vocabulary = eta1 + eta2;
  r.volume = vocabulary > 0 ? (n1 + n2) * std::log2(static_cast<double>(vocabulary)) : 0.0;
  if (eta1 == 0 || eta2 == 0) {
    r.difficulty = 0.0;
  } else {
    r.difficulty = (eta1 / 2.0) * (static_cast<double>(n2) / eta2);
  }
  r.effort = r.difficulty * r.volume;
  return r;
}

HalsteadTokens CountHalsteadTokens(const Program& program) {
  HalsteadTokens t;
  for (const StateDecl& s : program.states) {
    t.operators["assign"]++;
    t.operands[s.name]++;
    t.operands[FormatNumber(s.init)]++;
    for (IndexVar v : s.at) t.operands[std::string(IndexVarName(v))]++;
    CountExpr(s.update, &t);
  }
  CountExpr(program.policy, &t);
  return t;
}

HalsteadReport Halstead(const Program& program) {
  const HalsteadTokens t = CountHalsteadTokens(program);
  int n1 = 0;
  int n2 = 0;
  for (const auto& [k, v] : t.operators) n1 += v;
  for (const auto& [k, v] : t.operands) n2 += v;
  return HalsteadFromCounts(static_cast<int>(t.operators.size()),
                            static_cast<int>(t.operands.size()), n1, n2);
}

}  // namespace irps::dsl
