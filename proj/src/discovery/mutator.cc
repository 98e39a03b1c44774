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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "irps/dsl/validate.h"
#include "irps/error.h"
#include "irps/mutator.h"

namespace irps {

using dsl::Expr;
using dsl::IndexVar;
using dsl::Op;
using dsl::Program;
using dsl::StateDecl;

namespace {

template <typename Fn>
void VisitExpr(Expr& e, Fn& fn) {
  fn(e);
  for (Expr& a : e.args) VisitExpr(a, fn);
}

template <typename Fn>
void VisitExpr(const Expr& e, Fn& fn) {
  fn(e);
  for (const Expr& a : e.args) VisitExpr(a, fn);
}

// Every node of the program, states first, in serialization order.
struct NodeRef {
  Expr* node;
  int state;  // -1 for the policy
};

std::vector<NodeRef> AllNodes(Program& p) {
  std::vector<NodeRef> out;
  for (int s = 0; s < static_cast<int>(p.states.size()); ++s) {
    auto fn = [&](Expr& e) { out.push_back({&e, s}); };
    VisitExpr(p.states[s].update, fn);
  }
  auto fn = [&](Expr& e) { out.push_back({&e, -1}); };
  VisitExpr(p.policy, fn);
  return out;
}

void CollectStates(const Expr& e, std::set<std::string>* out) {
  auto fn = [&](const Expr& x) {
    if (x.op == Op::kSlice) out->insert(x.state);
  };
  VisitExpr(e, fn);
}

int FindState(const Program& p, const std::string& name) {
  for (int i = 0; i < static_cast<int>(p.states.size()); ++i) {
    if (p.states[i].name == name) return i;
  }
  return -1;
}

std::string FreshName(const Program& p, const std::string& base) {
  if (FindState(p, base) < 0) return base;
  for (int k = 2;; ++k) {
    const std::string name = base + std::to_string(k);
    if (FindState(p, name) < 0) return name;
  }
}

// The variable naming the same action one round earlier.
IndexVar Previous(IndexVar v) {
  switch (v) {
    case IndexVar::kA:
      return IndexVar::kPrevA;
    case IndexVar::kAOpp:
      return IndexVar::kPrevAOpp;
    default:
      return v;
  }
}

constexpr IndexVar kBoundVars[] = {IndexVar::kA, IndexVar::kAOpp, IndexVar::kPrevA,
                                   IndexVar::kPrevAOpp};

Expr WeightedTerm(int param, Expr term) {
  return dsl::Node(Op::kMul, {dsl::Param(param), std::move(term)});
}

void AddPolicyTerm(Program& p, Expr term) {
  p.policy = dsl::Node(Op::kAdd, {std::move(p.policy), std::move(term)});
}

bool Valid(const Program& p) { return dsl::Validate(p).empty(); }

// ---------------------------------------------------------------------------
// Catalog entries. Each returns false when it does not apply.

using Insp = std::span<const Program* const>;

bool RaiseRank(Program& p, Insp, Rng& rng) {
  std::vector<int> eligible;
  for (int s = 0; s < static_cast<int>(p.states.size()); ++s) {
    if (p.states[s].rank < dsl::kMaxRank) eligible.push_back(s);
  }
  if (eligible.empty()) return false;
  const int s = eligible[rng.UniformInt(static_cast<int>(eligible.size()))];
  const IndexVar ctx = rng.UniformInt(2) == 0 ? IndexVar::kA : IndexVar::kAOpp;
  StateDecl& decl = p.states[s];
  const std::string name = decl.name;
  decl.rank += 1;
  decl.at.insert(decl.at.begin(), Previous(ctx));
  for (int t = 0; t < static_cast<int>(p.states.size()); ++t) {
    const IndexVar v = t == s ? Previous(ctx) : ctx;
    auto fn = [&](Expr& e) {
      if (e.op == Op::kSlice && e.state == name) e.indices.insert(e.indices.begin(), v);
    };
    VisitExpr(p.states[t].update, fn);
  }
  auto fn = [&](Expr& e) {
    if (e.op == Op::kSlice && e.state == name) e.indices.insert(e.indices.begin(), ctx);
  };
  VisitExpr(p.policy, fn);
  return true;
}

bool LowerRank(Program& p, Insp, Rng& rng) {
  std::vector<int> eligible;
  for (int s = 0; s < static_cast<int>(p.states.size()); ++s) {
    if (p.states[s].rank > 1 && !p.states[s].at.empty()) eligible.push_back(s);
  }
  if (eligible.empty()) return false;
  StateDecl& decl = p.states[eligible[rng.UniformInt(static_cast<int>(eligible.size()))]];
  const std::string name = decl.name;
  decl.rank -= 1;
  decl.at.erase(decl.at.begin());
  for (NodeRef ref : AllNodes(p)) {
    Expr& e = *ref.node;
    if (e.op == Op::kSlice && e.state == name && !e.indices.empty()) {
      e.indices.erase(e.indices.begin());
    }
  }
  return true;
}

bool AddStickiness(Program& p, Insp, Rng& rng) {
  if (p.param_count >= dsl::kMaxParams) return false;
  const IndexVar v = rng.Uniform() < 0.8 ? IndexVar::kA : IndexVar::kAOpp;
  AddPolicyTerm(p, WeightedTerm(p.param_count++, dsl::Onehot(v)));
  return true;
}

bool RemoveTerm(Program& p, Insp, Rng& rng) {
  std::vector<Expr*> sums;
  auto fn = [&](Expr& e) {
    if (e.op == Op::kAdd || e.op == Op::kSub) sums.push_back(&e);
  };
  VisitExpr(p.policy, fn);
  if (sums.empty()) return false;
  Expr* e = sums[rng.UniformInt(static_cast<int>(sums.size()))];
  Expr keep = e->args[rng.UniformInt(2)];
  *e = std::move(keep);
  return true;
}

bool SwapIndex(Program& p, Insp, Rng& rng) {
  // Candidate sites: slice/onehot index positions and at-spec positions.
  std::vector<IndexVar*> sites;
  for (StateDecl& s : p.states) {
    for (IndexVar& v : s.at) sites.push_back(&v);
  }
  for (NodeRef ref : AllNodes(p)) {
    for (IndexVar& v : ref.node->indices) {
      if (v != IndexVar::kFree) sites.push_back(&v);
    }
  }
  if (sites.empty()) return false;
  IndexVar* site = sites[rng.UniformInt(static_cast<int>(sites.size()))];
  std::vector<IndexVar> options;
  for (IndexVar v : kBoundVars) {
    if (v != *site) options.push_back(v);
  }
  *site = options[rng.UniformInt(static_cast<int>(options.size()))];
  return true;
}

bool ChangeOp(Program& p, Insp, Rng& rng) {
  static constexpr Op kBinary[] = {Op::kAdd, Op::kSub, Op::kMul, Op::kDiv};
  std::vector<Expr*> sites;
  for (NodeRef ref : AllNodes(p)) {
    if (std::find(std::begin(kBinary), std::end(kBinary), ref.node->op) != std::end(kBinary)) {
      sites.push_back(ref.node);
    }
  }
  if (sites.empty()) return false;
  Expr* e = sites[rng.UniformInt(static_cast<int>(sites.size()))];
  std::vector<Op> options;
  for (Op op : kBinary) {
    if (op != e->op) options.push_back(op);
  }
  e->op = options[rng.UniformInt(static_cast<int>(options.size()))];
  return true;
}

bool InsertEma(Program& p, Insp, Rng& rng) {
  if (p.states.empty() || p.param_count >= dsl::kMaxParams) return false;
  StateDecl& s = p.states[rng.UniformInt(static_cast<int>(p.states.size()))];
  if (s.update.op == Op::kEma) return false;
  Expr old = dsl::Slice(s.name, s.at);
  s.update = dsl::Node(Op::kEma, {std::move(old), std::move(s.update),
                                  dsl::Unit(p.param_count++)});
  return true;
}

bool RemoveEma(Program& p, Insp, Rng& rng) {
  std::vector<Expr*> sites;
  for (NodeRef ref : AllNodes(p)) {
    if (ref.node->op == Op::kEma || ref.node->op == Op::kDecay) sites.push_back(ref.node);
  }
  if (sites.empty()) return false;
  Expr* e = sites[rng.UniformInt(static_cast<int>(sites.size()))];
  // ema(old, new, rate) keeps the new value; decay(old, rate) keeps old.
  Expr keep = e->op == Op::kEma ? e->args[1] : e->args[0];
  *e = std::move(keep);
  return true;
}

bool Graft(Program& p, Insp inspirations, Rng& rng) {
  if (inspirations.empty() || p.param_count >= dsl::kMaxParams) return false;
  const Program& src = *inspirations[rng.UniformInt(static_cast<int>(inspirations.size()))];
  std::vector<const Expr*> subs;
  auto fn = [&](const Expr& e) {
    if (!e.IsLeaf() && dsl::InferRank(src, e) == 1) subs.push_back(&e);
  };
  VisitExpr(src.policy, fn);
  if (subs.empty()) return false;
  Expr term = *subs[rng.UniformInt(static_cast<int>(subs.size()))];

  // States the term needs, closed under update dependencies.
  std::set<std::string> needed;
  CollectStates(term, &needed);
  for (bool grew = true; grew;) {
    grew = false;
    for (const StateDecl& s : src.states) {
      if (!needed.count(s.name)) continue;
      std::set<std::string> deps;
      CollectStates(s.update, &deps);
      for (const std::string& d : deps) grew |= needed.insert(d).second;
    }
  }
  std::map<std::string, std::string> rename;
  std::vector<StateDecl> copied;
  for (const StateDecl& s : src.states) {
    if (!needed.count(s.name)) continue;
    Program probe = p;
    for (const StateDecl& c : copied) probe.states.push_back(c);
    StateDecl c = s;
    c.name = FreshName(probe, s.name);
    rename[s.name] = c.name;
    copied.push_back(std::move(c));
  }
  const int offset = p.param_count;
  int max_param = -1;
  auto remap = [&](Expr& e) {
    if (e.op == Op::kSlice) e.state = rename.at(e.state);
    if (e.op == Op::kParam) {
      e.param += offset;
      max_param = std::max(max_param, e.param);
    }
  };
  VisitExpr(term, remap);
  for (StateDecl& s : copied) VisitExpr(s.update, remap);
  const int weight = std::max(offset, max_param + 1);
  if (weight >= dsl::kMaxParams) return false;
  for (StateDecl& s : copied) p.states.push_back(std::move(s));
  p.param_count = weight + 1;
  AddPolicyTerm(p, WeightedTerm(weight, std::move(term)));
  return true;
}

bool PerturbConst(Program& p, Insp, Rng& rng) {
  std::vector<Expr*> sites;
  for (NodeRef ref : AllNodes(p)) {
    if (ref.node->op == Op::kConst || ref.node->op == Op::kVector) sites.push_back(ref.node);
  }
  if (sites.empty()) return false;
  Expr* e = sites[rng.UniformInt(static_cast<int>(sites.size()))];
  auto jitter = [&](double v) {
    const double x = v * std::exp(0.5 * rng.Normal()) + 0.1 * rng.Normal();
    return std::round(x * 1000.0) / 1000.0;
  };
  if (e->op == Op::kConst) {
    e->value = jitter(e->value);
  } else {
    double& v = e->vec[rng.UniformInt(3)];
    v = jitter(v);
  }
  return true;
}

bool AddOpponentModel(Program& p, Insp, Rng& rng) {
  if (p.param_count + 2 > dsl::kMaxParams || p.states.size() >= dsl::kMaxStates) return false;
  StateDecl s;
  s.name = FreshName(p, "opp");
  s.rank = 1;
  const int rate = p.param_count++;
  s.update = dsl::Node(Op::kAdd, {dsl::Node(Op::kDecay, {dsl::Slice(s.name), dsl::Unit(rate)}),
                                  dsl::Onehot(IndexVar::kAOpp)});
  Expr freq = dsl::Node(Op::kDiv, {dsl::Slice(s.name),
                                   dsl::Node(Op::kSum, {dsl::Slice(s.name)})});
  // Mostly counter the forecast; sometimes expose the raw forecast.
  Expr term = rng.Uniform() < 0.8 ? dsl::Node(Op::kCounter, {std::move(freq)}) : std::move(freq);
  AddPolicyTerm(p, WeightedTerm(p.param_count++, std::move(term)));
  p.states.push_back(std::move(s));
  return true;
}

bool AddQVector(Program& p, bool counterfactual, Rng&) {
  if (p.param_count + 2 > dsl::kMaxParams || p.states.size() >= dsl::kMaxStates) return false;
  StateDecl s;
  s.name = FreshName(p, "q");
  s.rank = 1;
  const int rate = p.param_count++;
  if (counterfactual) {
    s.update = dsl::Node(Op::kEma, {dsl::Slice(s.name), dsl::CfReward(), dsl::Unit(rate)});
  } else {
    s.at = {IndexVar::kA};
    s.update = dsl::Node(Op::kEma,
                         {dsl::Slice(s.name, {IndexVar::kA}), dsl::Reward(), dsl::Unit(rate)});
  }
  AddPolicyTerm(p, WeightedTerm(p.param_count++, dsl::Slice(s.name)));
  p.states.push_back(std::move(s));
  return true;
}

bool AddQ(Program& p, Insp, Rng& rng) { return AddQVector(p, false, rng); }
bool AddCfQ(Program& p, Insp, Rng& rng) { return AddQVector(p, true, rng); }

using Entry = bool (*)(Program&, Insp, Rng&);

const std::map<std::string, Entry>& Entries() {
  static const auto* entries = new std::map<std::string, Entry>{
      {"raise_rank", RaiseRank},
      {"lower_rank", LowerRank},
      {"add_stickiness", AddStickiness},
      {"remove_term", RemoveTerm},
      {"swap_index", SwapIndex},
      {"change_op", ChangeOp},
      {"insert_ema", InsertEma},
      {"remove_ema", RemoveEma},
      {"graft", Graft},
      {"perturb_const", PerturbConst},
      {"add_opponent_model", AddOpponentModel},
      {"add_q_vector", AddQ},
      {"add_cf_q_vector", AddCfQ},
  };
  return *entries;
}

}  // namespace

Program NormalizeProgram(Program p) {
  // Reachable states: those the policy reads, closed under update reads.
  std::set<std::string> live;
  CollectStates(p.policy, &live);
  for (bool grew = true; grew;) {
    grew = false;
    for (const StateDecl& s : p.states) {
      if (!live.count(s.name)) continue;
      std::set<std::string> deps;
      CollectStates(s.update, &deps);
      for (const std::string& d : deps) grew |= live.insert(d).second;
    }
  }
  std::vector<StateDecl> kept;
  for (StateDecl& s : p.states) {
    if (live.count(s.name)) kept.push_back(std::move(s));
  }
  p.states = std::move(kept);

  std::map<int, int> order;
  auto number = [&](Expr& e) {
    if (e.op == Op::kParam && e.param >= 0 && e.param < p.param_count) {
      order.emplace(e.param, static_cast<int>(order.size()));
    }
  };
  for (StateDecl& s : p.states) VisitExpr(s.update, number);
  VisitExpr(p.policy, number);
  auto apply = [&](Expr& e) {
    if (e.op != Op::kParam) return;
    auto it = order.find(e.param);
    if (it != order.end()) e.param = it->second;
  };
  for (StateDecl& s : p.states) VisitExpr(s.update, apply);
  VisitExpr(p.policy, apply);
  // Out-of-range references are left for the validator to report.
  bool out_of_range = false;
  auto probe = [&](Expr& e) {
    if (e.op == Op::kParam && (e.param < 0 || e.param >= p.param_count)) out_of_range = true;
  };
  for (StateDecl& s : p.states) VisitExpr(s.update, probe);
  VisitExpr(p.policy, probe);
  if (!out_of_range) p.param_count = static_cast<int>(order.size());
  return p;
}

const std::vector<std::string>& RuleMutator::Catalog() {
  static const auto* names = [] {
    auto* v = new std::vector<std::string>;
    for (const auto& [name, fn] : Entries()) v->push_back(name);
    return v;
  }();
  return *names;
}

std::optional<Program> RuleMutator::Apply(const std::string& tag, const Program& parent,
                                          std::span<const Program* const> inspirations,
                                          Rng& rng) {
  auto it = Entries().find(tag);
  if (it == Entries().end()) throw Error("unknown mutation '" + tag + "'");
  Program child = parent;
  if (!it->second(child, inspirations, rng)) return std::nullopt;
  child = NormalizeProgram(std::move(child));
  if (!Valid(child)) return std::nullopt;
  return child;
}

Proposal RuleMutator::Propose(const Candidate& parent,
                              std::span<const Candidate* const> inspirations, Rng& rng) {
  std::vector<const Program*> insp;
  for (const Candidate* c : inspirations) insp.push_back(&c->program);
  const std::string parent_id = ProgramId(parent.program);
  const auto& catalog = Catalog();
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const std::string& tag = catalog[rng.UniformInt(static_cast<int>(catalog.size()))];
    auto child = Apply(tag, parent.program, insp, rng);
    if (child && ProgramId(*child) != parent_id) {
      Proposal p;
      p.program = std::move(*child);
      p.tag = tag;
      return p;
    }
  }
  // Nothing applied: return the parent with a fresh constant offset, which
  // leaves its predictions unchanged.
  Proposal p;
  p.program = parent.program;
  AddPolicyTerm(p.program, dsl::Const(std::round(rng.Normal() * 1000.0) / 1000.0));
  p.tag = "fresh_constant";
  p.fallback = true;
  return p;
}

}  // namespace irps
