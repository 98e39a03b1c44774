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

// Flattened form of a validated program: one instruction per AST node in
// post-order, each writing its own register of 3^rank values.

#ifndef IRPS_DSL_COMPILED_H_
#define IRPS_DSL_COMPILED_H_

#include <array>
#include <vector>

#include "irps/dsl/ast.h"

namespace irps::dsl {

struct Instr {
  Op op = Op::kConst;
  int dst = 0;  // register offset
  int rank = 0;
  std::array<int, 3> src{-1, -1, -1};  // register offsets of arguments
  std::array<int, 3> src_rank{0, 0, 0};
  double value = 0.0;
  std::array<double, 3> vec{};
  int param = 0;
  ParamTransform transform = ParamTransform::kRaw;
  // kSlice: state index and one index variable per state axis (missing
  // trailing indices are free). kOnehot: idx[0].
  int state = -1;
  std::array<IndexVar, 3> idx{IndexVar::kFree, IndexVar::kFree, IndexVar::kFree};
};

struct CompiledState {
  int rank = 0;
  int size = 1;
  int offset = 0;  // into the flat state buffer
  double init = 0.0;
  std::array<IndexVar, 3> at{IndexVar::kFree, IndexVar::kFree, IndexVar::kFree};
  int n_at = 0;
  int first = 0;  // instruction range of the update expression
  int end = 0;
  int value_reg = 0;
  int value_rank = 0;
  bool needs_prev = false;
};

struct CompiledProgram {
  Program source;
  int param_count = 0;
  std::vector<CompiledState> states;
  int state_size = 0;
  std::vector<Instr> code;
  int register_size = 0;
  int policy_first = 0;
  int policy_end = 0;
  int policy_reg = 0;
  int policy_rank = 0;
  bool policy_needs_prev = false;
  // False when the policy reads per-round inputs; then the prediction
  // before any observation is uniform.
  bool policy_static = true;
};

// Validates and flattens. Throws ValidationError.
CompiledProgram Compile(const Program& program);

}  // namespace irps::dsl

#endif  // IRPS_DSL_COMPILED_H_
