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

#include "irps/models.h"

#include <variant>

#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"
#include "irps/error.h"

#define IRPS_KERNEL_NS scalar_impl
#include "kernels/eval_impl.h"

namespace irps {
namespace {

namespace k = kernels::scalar_impl;

using Engine = std::variant<k::NashEngine<double>, k::CsEwaEngine<double>,
                            k::ProgramEngine<double>>;

k::CsEwaTypedParams<double> Typed(const CsEwaParams& p) {
  return k::CsEwaTypedParams<double>::FromPlain(p);
}

}  // namespace

Model Model::Nash() { return Model(); }

Model Model::CsEwa() {
  Model m;
  m.kind_ = ModelKind::kCsEwa;
  m.name_ = "csewa";
  return m;
}

Model Model::FromProgram(const dsl::Program& program) {
  Model m;
  m.kind_ = ModelKind::kProgram;
  m.name_ = program.name;
  m.program_ = std::make_shared<const dsl::CompiledProgram>(dsl::Compile(program));
  return m;
}

Model Model::FromSpec(const std::string& spec) {
  if (spec == "nash") return Nash();
  if (spec == "csewa") return CsEwa();
  if (spec.rfind("builtin:", 0) == 0) return FromProgram(dsl::Builtin(spec.substr(8)));
  if (spec.rfind("dsl:", 0) == 0) return FromProgram(dsl::ParseFile(spec.substr(4)));
  throw Error("unknown model '" + spec + "' (expected nash, csewa, builtin:NAME or dsl:FILE)");
}

int Model::param_count() const {
  switch (kind_) {
    case ModelKind::kNash:
      return 0;
    case ModelKind::kCsEwa:
      return kCsEwaParams;
    case ModelKind::kProgram:
      return program_->param_count;
  }
  return 0;
}

// ---------------------------------------------------------------------------

CsEwaParams CsEwaParamsFromTheta(std::span<const double> theta) {
  if (theta.size() != kCsEwaParams) throw ContractViolation("CS-EWA takes 6 parameters");
  CsEwaParams p;
  p.alpha = k::Sigmoid(theta[0]);
  p.alpha_prime = k::Sigmoid(theta[1]);
  p.phi_ewa = k::Sigmoid(theta[2]);
  p.delta = k::Sigmoid(theta[3]);
  p.rho = k::Sigmoid(theta[4]);
  p.beta = k::Softplus(theta[5]);
  return p;
}

CsEwaState::CsEwaState() {
  self_n.fill(1.0);
  shadow_n.fill(1.0);
}

int CsEwaState::StateIndex() const {
  if (history_len < kCsEwaHistory) return -1;
  return ((history[0][0] * 3 + history[0][1]) * 3 + history[1][0]) * 3 + history[1][1];
}

int CsEwaContextIndex(Action a_old, Action o_old, Action a_new, Action o_new) {
  return ((ToInt(a_old) * 3 + ToInt(o_old)) * 3 + ToInt(a_new)) * 3 + ToInt(o_new);
}

void CsEwaUpdateRow(std::array<double, kNumActions>& attractions, double& n,
                    const CsEwaParams& p, int chosen,
                    const std::array<double, kNumActions>& payoffs) {
  k::EwaUpdateRow(attractions.data(), n, Typed(p), chosen, payoffs.data());
}

void CsEwaRetrospectiveUpdate(CsEwaState& state, const CsEwaParams& p, Action a,
                              Action a_opp) {
  const int s = state.StateIndex();
  if (s < 0) return;
  std::array<double, kNumActions> self_pi{};
  std::array<double, kNumActions> shadow_pi{};
  for (Action j : kAllActions) {
    self_pi[ToInt(j)] = EgoReward(j, a_opp);
    shadow_pi[ToInt(j)] = EgoReward(j, a);
  }
  CsEwaUpdateRow(state.self_table[s], state.self_n[s], p, ToInt(a), self_pi);
  CsEwaUpdateRow(state.shadow_table[s], state.shadow_n[s], p, ToInt(a_opp), shadow_pi);
}

std::array<double, kNumActions> CsEwaForecast(const CsEwaState& state, const CsEwaParams& p) {
  const int s = state.StateIndex();
  if (s < 0) return {1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::array<double, kNumActions> out{};
  k::EwaForecast(state.self_table[s].data(), state.shadow_table[s].data(), Typed(p),
                 out.data());
  return out;
}

Logits CsEwaAct(const CsEwaState& state, const CsEwaParams& p) {
  const int s = state.StateIndex();
  if (s < 0) return {0.0, 0.0, 0.0};
  Logits out{};
  k::EwaAct(state.self_table[s].data(), state.shadow_table[s].data(), Typed(p), out.data());
  return out;
}

Logits CsEwaObserve(CsEwaState& state, const CsEwaParams& p, Action a, Action a_opp) {
  CsEwaRetrospectiveUpdate(state, p, a, a_opp);
  if (state.history_len < kCsEwaHistory) {
    state.history[state.history_len++] = {ToInt(a), ToInt(a_opp)};
  } else {
    state.history[0] = state.history[1];
    state.history[1] = {ToInt(a), ToInt(a_opp)};
  }
  return CsEwaAct(state, p);
}

// ---------------------------------------------------------------------------

struct ModelState::Impl {
  Engine engine;
};

namespace {

Engine MakeEngine(const Model& model, std::span<const double> theta) {
  switch (model.kind()) {
    case ModelKind::kNash:
      return k::NashEngine<double>();
    case ModelKind::kCsEwa: {
      k::CsEwaEngine<double> e;
      e.Reset(theta.data());
      return e;
    }
    case ModelKind::kProgram: {
      k::ProgramEngine<double> e(*model.program());
      e.Reset(theta.data());
      return e;
    }
  }
  throw ContractViolation("unknown model kind");
}

}  // namespace

ModelState::ModelState(const Model& model, std::span<const double> theta)
    : model_(model), theta_(theta.begin(), theta.end()) {
  if (static_cast<int>(theta.size()) != model.param_count()) {
    throw ContractViolation("model '" + model.name() + "' takes " +
                            std::to_string(model.param_count()) + " parameters, got " +
                            std::to_string(theta.size()));
  }
  impl_ = std::make_unique<Impl>(Impl{MakeEngine(model_, theta_)});
}

ModelState::ModelState(const ModelState& other)
    : model_(other.model_),
      theta_(other.theta_),
      impl_(std::make_unique<Impl>(*other.impl_)) {}

ModelState& ModelState::operator=(const ModelState& other) {
  if (this != &other) {
    model_ = other.model_;
    theta_ = other.theta_;
    impl_ = std::make_unique<Impl>(*other.impl_);
  }
  return *this;
}

ModelState::ModelState(ModelState&&) noexcept = default;
ModelState& ModelState::operator=(ModelState&&) noexcept = default;
ModelState::~ModelState() = default;

Logits ModelState::InitialLogits() const {
  Logits out{};
  std::visit([&](auto& e) { e.InitialLogits(out.data()); }, impl_->engine);
  return out;
}

Logits ModelState::Observe(Action a, Action a_opp, double reward) {
  Logits out{};
  std::visit([&](auto& e) { e.Observe(ToInt(a), ToInt(a_opp), reward, out.data()); },
             impl_->engine);
  return out;
}

std::pair<Logits, ModelState> ModelStep(const Model& model, std::span<const double> theta,
                                        Action a, Action a_opp, double reward,
                                        const ModelState& h) {
  const Model& hm = h.model();
  const bool same_model = hm.kind() == model.kind() && hm.program() == model.program();
  const bool same_theta = std::equal(theta.begin(), theta.end(), h.theta().begin(),
                                     h.theta().end());
  if (!same_model || !same_theta) {
    throw ContractViolation("model state belongs to a different model or parameter vector");
  }
  ModelState next(h);
  const Logits logits = next.Observe(a, a_opp, reward);
  return {logits, std::move(next)};
}

std::array<double, kNumActions> Softmax(const Logits& logits) {
  std::array<double, kNumActions> out{};
  k::Softmax3(logits.data(), out.data());
  return out;
}

}  // namespace irps
