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

#include "irps/dsl/validate.h"

#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include "irps/dsl/text.h"

namespace irps::dsl {
namespace {

std::string JoinMessages(const std::vector<Diagnostic>& diags) {
  std::string out = "invalid program:";
  for (const Diagnostic& d : diags) out += " [" + d.code + "] " + d.message + ";";
  if (!diags.empty()) out.pop_back();
  return out;
}

const StateDecl* FindState(const Program& p, const std::string& name) {
  for (const StateDecl& s : p.states) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

class Checker {
 public:
  Checker(const Program& p, std::vector<Diagnostic>* out) : p_(p), out_(out) {}

  // Returns the rank, or -1 after recording a diagnostic.
  int Check(const Expr& e, const std::string& where) {
    switch (e.op) {
      case Op::kConst:
        if (!std::isfinite(e.value)) Report("value", where, "non-finite constant");
        return 0;
      case Op::kVector:
        for (double v : e.vec) {
          if (!std::isfinite(v)) Report("value", where, "non-finite vector component");
        }
        return 1;
      case Op::kParam:
        if (e.param < 0 || e.param >= p_.param_count) {
          Report("param_index", where,
                 "parameter index " + std::to_string(e.param) + " outside 0.." +
                     std::to_string(p_.param_count - 1));
        }
        return 0;
      case Op::kReward:
        return 0;
      case Op::kCfReward:
        return 1;
      case Op::kSlice: {
        const StateDecl* s = FindState(p_, e.state);
        if (s == nullptr) {
          Report("state", where, "unknown state '" + e.state + "'");
          return -1;
        }
        if (static_cast<int>(e.indices.size()) > s->rank) {
          Report("shape", where,
                 "slice of rank-" + std::to_string(s->rank) + " state '" + e.state +
                     "' with " + std::to_string(e.indices.size()) + " indices");
          return -1;
        }
        int fixed = 0;
        for (IndexVar v : e.indices) fixed += v != IndexVar::kFree;
        return s->rank - fixed;
      }
      case Op::kOnehot:
        if (e.indices.size() != 1 || e.indices[0] == IndexVar::kFree) {
          Report("shape", where, "onehot needs exactly one bound index variable");
          return -1;
        }
        return 1;
      default:
        break;
    }
    if (static_cast<int>(e.args.size()) != Arity(e.op)) {
      Report("shape", where, std::string(OpName(e.op)) + " has wrong argument count");
      return -1;
    }
    std::vector<int> ranks;
    for (const Expr& a : e.args) ranks.push_back(Check(a, where));
    for (int r : ranks) {
      if (r < 0) return -1;
    }
    switch (e.op) {
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul:
      case Op::kDiv:
        return Broadcast(ranks[0], ranks[1], e, where);
      case Op::kEma:
        if (!CheckRate(e.args[2], where)) return -1;
        return Broadcast(ranks[0], ranks[1], e, where);
      case Op::kDecay:
        if (!CheckRate(e.args[1], where)) return -1;
        return ranks[0];
      case Op::kCounter:
        if (ranks[0] < 1) {
          Report("shape", where, "counter needs a tensor argument");
          return -1;
        }
        return ranks[0];
      case Op::kSoftmax: {
        if (ranks[0] < 1) {
          Report("shape", where, "softmax needs a tensor argument");
          return -1;
        }
        const Expr& t = e.args[1];
        const bool ok =
            (t.op == Op::kConst && t.value > 0.0) ||
            (t.op == Op::kParam && t.transform != ParamTransform::kRaw);
        if (!ok) {
          Report("temperature", where,
                 "softmax temperature must be a positive constant, posK or unitK (got " +
                     SerializeExpr(t) + ")");
          return -1;
        }
        return ranks[0];
      }
      case Op::kSum:
        if (ranks[0] < 1) {
          Report("shape", where, "sum needs a tensor argument");
          return -1;
        }
        return ranks[0] - 1;
      default:
        return -1;
    }
  }

 private:
  int Broadcast(int x, int y, const Expr& e, const std::string& where) {
    if (x == y || x == 0 || y == 0) return std::max(x, y);
    Report("shape", where,
           std::string(OpName(e.op)) + " of rank " + std::to_string(x) + " and rank " +
               std::to_string(y) + " operands");
    return -1;
  }

  bool CheckRate(const Expr& rate, const std::string& where) {
    const bool ok = (rate.op == Op::kConst && rate.value >= 0.0 && rate.value <= 1.0) ||
                    (rate.op == Op::kParam && rate.transform == ParamTransform::kUnit);
    if (!ok) {
      Report("rate", where,
             "rate must be a constant in [0, 1] or unitK (got " + SerializeExpr(rate) + ")");
    }
    return ok;
  }

  void Report(const std::string& code, const std::string& where, const std::string& msg) {
    out_->push_back({code, where + ": " + msg});
  }

  const Program& p_;
  std::vector<Diagnostic>* out_;
};

bool AnyIndex(const Expr& e, bool prev_only) {
  for (IndexVar v : e.indices) {
    if (v == IndexVar::kPrevA || v == IndexVar::kPrevAOpp) return true;
    if (!prev_only && v != IndexVar::kFree) return true;
  }
  if (!prev_only && (e.op == Op::kReward || e.op == Op::kCfReward)) return true;
  for (const Expr& a : e.args) {
    if (AnyIndex(a, prev_only)) return true;
  }
  return false;
}

bool IsReservedName(const std::string& name) {
  static const std::set<std::string> kWords = {
      "a", "a_opp", "prev_a", "prev_a_opp", "_", "r", "cfr", "program", "params",
      "state", "shape", "init", "at", "policy"};
  if (name.empty() || kWords.count(name)) return true;
  for (const char* prefix : {"param", "unit", "pos"}) {
    const std::string p(prefix);
    if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
        std::isdigit(static_cast<unsigned char>(name[p.size()]))) {
      return true;
    }
  }
  for (Op op : {Op::kSlice, Op::kOnehot, Op::kAdd, Op::kSub, Op::kMul, Op::kDiv, Op::kEma,
                Op::kDecay, Op::kCounter, Op::kSoftmax, Op::kSum}) {
    if (OpName(op) == name) return true;
  }
  return std::isdigit(static_cast<unsigned char>(name[0])) || name[0] == '-' ||
         name[0] == '+' || name[0] == '.';
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(JoinMessages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> Validate(const Program& p) {
  std::vector<Diagnostic> out;
  if (p.param_count > kMaxParams) {
    out.push_back({"param_budget", "param budget exceeded: " +
                                       std::to_string(p.param_count) + " > " +
                                       std::to_string(kMaxParams)});
  }
  if (p.param_count < 0) out.push_back({"param_budget", "negative parameter count"});
  if (static_cast<int>(p.states.size()) > kMaxStates) {
    out.push_back({"limit", "too many states"});
  }
  std::set<std::string> names;
  for (const StateDecl& s : p.states) {
    if (!names.insert(s.name).second) {
      out.push_back({"state", "duplicate state '" + s.name + "'"});
    }
    if (IsReservedName(s.name)) {
      out.push_back({"state", "state name '" + s.name + "' is reserved"});
    }
    if (s.rank < 0 || s.rank > kMaxRank) {
      out.push_back({"shape", "state '" + s.name + "' has rank " + std::to_string(s.rank)});
    }
    if (!std::isfinite(s.init)) {
      out.push_back({"value", "state '" + s.name + "' has a non-finite init"});
    }
  }
  if (!out.empty()) return out;

  Checker checker(p, &out);
  int nodes = CountNodes(p.policy);
  int depth = Depth(p.policy);
  for (const StateDecl& s : p.states) {
    const std::string where = "state " + s.name;
    nodes += CountNodes(s.update);
    depth = std::max(depth, Depth(s.update));
    bool at_ok = static_cast<int>(s.at.size()) <= s.rank;
    for (IndexVar v : s.at) at_ok = at_ok && v != IndexVar::kFree;
    if (!at_ok) {
      out.push_back({"shape", where + ": at-spec must bind at most rank-many indices, none free"});
      continue;
    }
    const int rank = checker.Check(s.update, where);
    const int target = s.rank - static_cast<int>(s.at.size());
    if (rank >= 0 && rank != target && rank != 0) {
      out.push_back({"shape", where + ": update has rank " + std::to_string(rank) +
                                  ", addressed slice has rank " + std::to_string(target)});
    }
  }
  const int policy_rank = checker.Check(p.policy, "policy");
  if (policy_rank > 1) {
    out.push_back({"shape", "policy: rank " + std::to_string(policy_rank) +
                                " (must be a scalar or a 3-vector)"});
  }
  if (nodes > kMaxNodes) out.push_back({"limit", "program has too many nodes"});
  if (depth > kMaxDepth) out.push_back({"limit", "program nests too deeply"});
  return out;
}

void CheckValid(const Program& program) {
  auto diags = Validate(program);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

int InferRank(const Program& program, const Expr& expr) {
  std::vector<Diagnostic> sink;
  return Checker(program, &sink).Check(expr, "expr");
}

bool UsesPrevious(const Expr& expr) { return AnyIndex(expr, true); }
bool UsesObservation(const Expr& expr) { return AnyIndex(expr, false); }

int CountNodes(const Expr& expr) {
  int n = 1;
  for (const Expr& a : expr.args) n += CountNodes(a);
  return n;
}

int Depth(const Expr& expr) {
  int d = 0;
  for (const Expr& a : expr.args) d = std::max(d, Depth(a));
  return d + 1;
}

}  // namespace irps::dsl
