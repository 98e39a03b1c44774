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

#include "irps/dsl/compiled.h"

#include "irps/dsl/validate.h"

namespace irps::dsl {
namespace {

int Pow3(int rank) {
  int n = 1;
  for (int i = 0; i < rank; ++i) n *= 3;
  return n;
}

class Compiler {
 public:
  explicit Compiler(CompiledProgram* out) : out_(out) {}

  // Emits code for `e` and returns the index of its instruction.
  int Emit(const Expr& e) {
    Instr ins;
    ins.op = e.op;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      const int child = Emit(e.args[i]);
      ins.src[i] = out_->code[child].dst;
      ins.src_rank[i] = out_->code[child].rank;
    }
    switch (e.op) {
      case Op::kConst:
        ins.value = e.value;
        ins.rank = 0;
        break;
      case Op::kVector:
        ins.vec = e.vec;
        ins.rank = 1;
        break;
      case Op::kParam:
        ins.param = e.param;
        ins.transform = e.transform;
        ins.rank = 0;
        break;
      case Op::kReward:
        ins.rank = 0;
        break;
      case Op::kCfReward:
        ins.rank = 1;
        break;
      case Op::kSlice: {
        ins.state = StateIndex(e.state);
        const CompiledState& s = out_->states[ins.state];
        int fixed = 0;
        for (std::size_t i = 0; i < e.indices.size(); ++i) {
          ins.idx[i] = e.indices[i];
          fixed += e.indices[i] != IndexVar::kFree;
        }
        ins.rank = s.rank - fixed;
        break;
      }
      case Op::kOnehot:
        ins.idx[0] = e.indices[0];
        ins.rank = 1;
        break;
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul:
      case Op::kDiv:
      case Op::kEma:
        ins.rank = std::max(ins.src_rank[0], ins.src_rank[1]);
        break;
      case Op::kDecay:
      case Op::kCounter:
      case Op::kSoftmax:
        ins.rank = ins.src_rank[0];
        break;
      case Op::kSum:
        ins.rank = ins.src_rank[0] - 1;
        break;
    }
    ins.dst = out_->register_size;
    out_->register_size += Pow3(ins.rank);
    out_->code.push_back(ins);
    return static_cast<int>(out_->code.size()) - 1;
  }

 private:
  int StateIndex(const std::string& name) const {
    for (std::size_t i = 0; i < out_->source.states.size(); ++i) {
      if (out_->source.states[i].name == name) return static_cast<int>(i);
    }
    return -1;  // unreachable after validation
  }

  CompiledProgram* out_;
};

}  // namespace

CompiledProgram Compile(const Program& program) {
  CheckValid(program);
  CompiledProgram out;
  out.source = program;
  out.param_count = program.param_count;
  for (const StateDecl& s : program.states) {
    CompiledState cs;
    cs.rank = s.rank;
    cs.size = Pow3(s.rank);
    cs.offset = out.state_size;
    cs.init = s.init;
    cs.n_at = static_cast<int>(s.at.size());
    bool at_prev = false;
    for (int i = 0; i < cs.n_at; ++i) {
      cs.at[i] = s.at[i];
      at_prev = at_prev || s.at[i] == IndexVar::kPrevA || s.at[i] == IndexVar::kPrevAOpp;
    }
    cs.needs_prev = at_prev || UsesPrevious(s.update);
    out.state_size += cs.size;
    out.states.push_back(cs);
  }
  Compiler c(&out);
  for (std::size_t i = 0; i < program.states.size(); ++i) {
    CompiledState& cs = out.states[i];
    cs.first = static_cast<int>(out.code.size());
    const int root = c.Emit(program.states[i].update);
    cs.end = static_cast<int>(out.code.size());
    cs.value_reg = out.code[root].dst;
    cs.value_rank = out.code[root].rank;
  }
  out.policy_first = static_cast<int>(out.code.size());
  const int root = c.Emit(program.policy);
  out.policy_end = static_cast<int>(out.code.size());
  out.policy_reg = out.code[root].dst;
  out.policy_rank = out.code[root].rank;
  out.policy_needs_prev = UsesPrevious(program.policy);
  out.policy_static = !UsesObservation(program.policy);
  return out;
}

}  // namespace irps::dsl
