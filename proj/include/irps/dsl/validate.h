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

// Static checks on programs.
//
// Typing rules (rank = number of size-3 axes):
//   const, param*, unit*, pos*, r   rank 0
//   [x y z], cfr, onehot            rank 1
//   slice s i1..ik                  rank(s) - (number of non-free indices),
//                                   k <= rank(s), missing indices are free
//   add sub mul div                 both ranks equal, or one of them is 0
//   ema old new rate                old/new as above; rate is a constant in
//                                   [0, 1] or unitK
//   decay old rate                  rate as for ema
//   counter v, softmax v temp       rank(v) >= 1, same rank; temp is a
//                                   positive constant, posK or unitK
//   sum v                           rank(v) >= 1, result rank(v) - 1
// A state update must have the rank of the addressed slice (rank minus the
// number of `at` indices) or rank 0. The policy must have rank 0 or 1.

#ifndef IRPS_DSL_VALIDATE_H_
#define IRPS_DSL_VALIDATE_H_

#include <string>
#include <vector>

#include "irps/dsl/ast.h"
#include "irps/error.h"

namespace irps::dsl {

inline constexpr int kMaxStates = 8;
inline constexpr int kMaxNodes = 200;
inline constexpr int kMaxDepth = 24;

struct Diagnostic {
  // One of: param_budget, param_index, state, shape, rate, temperature,
  // limit, value.
  std::string code;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Returns every problem found; empty means the program is valid.
std::vector<Diagnostic> Validate(const Program& program);
// Throws ValidationError when Validate() reports anything.
void CheckValid(const Program& program);

// Rank of `expr` under `program`'s state declarations, or -1 when the
// expression does not type-check.
int InferRank(const Program& program, const Expr& expr);

// True when the expression reads prev_a or prev_a_opp.
bool UsesPrevious(const Expr& expr);
// True when the expression reads any per-round input (a, a_opp, prev_*, r,
// cfr).
bool UsesObservation(const Expr& expr);
int CountNodes(const Expr& expr);
int Depth(const Expr& expr);

}  // namespace irps::dsl

#endif  // IRPS_DSL_VALIDATE_H_
