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

// Shipped programs.
//
//   nash         uniform play, no state.
//   human_sbb    3x3x3 reward Q-table keyed by the previous joint action and
//                the current move, a decayed opponent move frequency, and a
//                stickiness bonus.
//   gemini_sbb   counterfactual 3x3x3 Q-table, opponent move counts
//                conditioned on the opponent's previous move, stickiness.
//   gpt51_sbb    reward Q-table plus opponent counts conditioned on the
//                previous joint action (3x3x3).
//   gptoss_sbb   reward Q-vector over own moves, opponent move frequency,
//                stickiness.
//
// Every opponent model is level-1: it forecasts the next opponent move and
// is turned into a preference through `counter`. The SBB programs are
// reconstructions from structural descriptions, not verbatim listings.

#ifndef IRPS_DSL_BUILTINS_H_
#define IRPS_DSL_BUILTINS_H_

#include <string>
#include <vector>

#include "irps/dsl/ast.h"

namespace irps::dsl {

std::vector<std::string> BuiltinNames();
// Canonical source text. Throws Error for an unknown name.
const std::string& BuiltinSource(const std::string& name);
Program Builtin(const std::string& name);

// A plausible parameter vector (unconstrained space) for generating
// synthetic data from a builtin.
std::vector<double> BuiltinReferenceTheta(const std::string& name);

}  // namespace irps::dsl

#endif  // IRPS_DSL_BUILTINS_H_
