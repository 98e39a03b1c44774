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

// Halstead size metrics over the program AST.
//
// Operators: every interior node (slice, onehot, add, ..., sum) plus one
// `assign` per state declaration. Operands: every leaf by its canonical
// spelling (numbers, vectors, paramK/unitK/posK, r, cfr), every state name
// and index variable mentioned by a slice, onehot or `at` spec, and each
// state's declared name and init value.

#ifndef IRPS_DSL_HALSTEAD_H_
#define IRPS_DSL_HALSTEAD_H_

#include <map>
#include <string>

#include "irps/dsl/ast.h"

namespace irps::dsl {

struct HalsteadReport {
  int eta1 = 0;  // distinct operators
  int eta2 = 0;  // distinct operands
  int n1 = 0;    // total operators
  int n2 = 0;    // total operands
  double volume = 0.0;
  double difficulty = 0.0;
  double effort = 0.0;
};

// V = (N1 + N2) log2(eta1 + eta2), D = (eta1 / 2)(N2 / eta2), E = D V.
// With eta1 == 0 the difficulty and effort are 0.
HalsteadReport HalsteadFromCounts(int eta1, int eta2, int n1, int n2);

HalsteadReport Halstead(const Program& program);

// Occurrence tables behind Halstead(), for inspection.
struct HalsteadTokens {
  std::map<std::string, int> operators;
  std::map<std::string, int> operands;
};
HalsteadTokens CountHalsteadTokens(const Program& program);

}  // namespace irps::dsl

#endif  // IRPS_DSL_HALSTEAD_H_
