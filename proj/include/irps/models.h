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

// Behavioral models: a model maps the round just played (own move, opponent
// move, reward), its internal state and a parameter vector to logits over
// the agent's next move and an updated state.
//
// Three kinds exist: the parameter-free Nash model, the contextual
// sophisticated EWA model (CS-EWA) and compiled DSL programs.

#ifndef IRPS_MODELS_H_
#define IRPS_MODELS_H_

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "irps/dsl/ast.h"
#include "irps/dsl/compiled.h"
#include "irps/game.h"

namespace irps {

using Logits = std::array<double, kNumActions>;

enum class ModelKind { kNash, kCsEwa, kProgram };

class Model {
 public:
  static Model Nash();
  static Model CsEwa();
  // Validates and compiles. Throws dsl::ValidationError.
  static Model FromProgram(const dsl::Program& program);
  // "nash", "csewa", "builtin:NAME" or "dsl:PATH".
  static Model FromSpec(const std::string& spec);

  ModelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int param_count() const;
  // Null unless kind() == kProgram.
  const dsl::CompiledProgram* program() const { return program_.get(); }

 private:
  ModelKind kind_ = ModelKind::kNash;
  std::string name_ = "nash";
  std::shared_ptr<const dsl::CompiledProgram> program_;
};

// ---------------------------------------------------------------------------
// CS-EWA.
//
// Unconstrained parameters, in order: alpha = sigmoid(t0),
// alpha_prime = sigmoid(t1), phi_ewa = sigmoid(t2), delta = sigmoid(t3),
// rho = sigmoid(t4), beta = softplus(t5).

inline constexpr int kCsEwaParams = 6;
inline constexpr int kCsEwaHistory = 2;
inline constexpr int kCsEwaContexts = 81;

struct CsEwaParams {
  double alpha = 0.5;
  double alpha_prime = 0.5;
  double phi_ewa = 0.5;
  double delta = 0.5;
  double rho = 0.5;
  double beta = 1.0;
};

CsEwaParams CsEwaParamsFromTheta(std::span<const double> theta);

struct CsEwaState {
  std::array<std::array<double, kNumActions>, kCsEwaContexts> self_table{};
  std::array<std::array<double, kNumActions>, kCsEwaContexts> shadow_table{};
  std::array<double, kCsEwaContexts> self_n{};
  std::array<double, kCsEwaContexts> shadow_n{};
  // Last joint actions (ego, opp), oldest first; `history_len` are valid.
  std::array<std::array<int, 2>, kCsEwaHistory> history{};
  int history_len = 0;

  CsEwaState();
  // Context index of the last two joint actions; -1 during warmup.
  int StateIndex() const;
};

// ((a_old * 3 + o_old) * 3 + a_new) * 3 + o_new.
int CsEwaContextIndex(Action a_old, Action o_old, Action a_new, Action o_new);

// EWA update of both tables at the current context, for a round in which
// the agent played `a` and the opponent `a_opp`. No-op during warmup.
void CsEwaRetrospectiveUpdate(CsEwaState& state, const CsEwaParams& p, Action a,
                              Action a_opp);
// Update of one table row; exposed for hand checks.
void CsEwaUpdateRow(std::array<double, kNumActions>& attractions, double& n,
                    const CsEwaParams& p, int chosen,
                    const std::array<double, kNumActions>& payoffs);
// Forecast distribution over the opponent's next move; uniform in warmup.
std::array<double, kNumActions> CsEwaForecast(const CsEwaState& state,
                                              const CsEwaParams& p);
// Log-probabilities of the agent's next move; zeros in warmup.
Logits CsEwaAct(const CsEwaState& state, const CsEwaParams& p);
// Full step: update, append the round to the history, act.
Logits CsEwaObserve(CsEwaState& state, const CsEwaParams& p, Action a, Action a_opp);

// ---------------------------------------------------------------------------
// Generic stepping.

// Per-trajectory model state. Copyable; carries its model identity.
class ModelState {
 public:
  ModelState(const Model& model, std::span<const double> theta);
  ModelState(const ModelState& other);
  ModelState& operator=(const ModelState& other);
  ModelState(ModelState&&) noexcept;
  ModelState& operator=(ModelState&&) noexcept;
  ~ModelState();

  // Prediction for round 0 (before anything is observed).
  Logits InitialLogits() const;
  // Consumes one round and returns logits for the next one.
  Logits Observe(Action a, Action a_opp, double reward);

  const Model& model() const { return model_; }
  const std::vector<double>& theta() const { return theta_; }

 private:
  struct Impl;
  Model model_;
  std::vector<double> theta_;
  std::unique_ptr<Impl> impl_;
};

// Pure form of ModelState::Observe. Throws ContractViolation when `h` was
// created for a different model or parameter vector.
std::pair<Logits, ModelState> ModelStep(const Model& model, std::span<const double> theta,
                                        Action a, Action a_opp, double reward,
                                        const ModelState& h);

// Normalized probabilities from logits.
std::array<double, kNumActions> Softmax(const Logits& logits);

}  // namespace irps

#endif  // IRPS_MODELS_H_
