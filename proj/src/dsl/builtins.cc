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

#include "irps/dsl/builtins.h"

#include <map>

#include "irps/dsl/text.h"
#include "irps/error.h"

namespace irps::dsl {
namespace {

struct Entry {
  std::string source;
  std::vector<double> theta;
};

const std::map<std::string, Entry>& Table() {
  static const auto* table = new std::map<std::string, Entry>{
      {"nash",
       {"(program nash\n"
        "  (params 0)\n"
        "  (policy [1 1 1]))\n",
        {}}},
      {"human_sbb",
       {"(program human_sbb\n"
        "  (params 5)\n"
        "  (state q (shape 3 3 3) (init 0) (at prev_a_opp prev_a a)\n"
        "    (ema (slice q prev_a_opp prev_a a) r unit0))\n"
        "  (state opp (shape 3) (init 0) (at)\n"
        "    (add (decay (slice opp) unit2) (onehot a_opp)))\n"
        "  (policy (add (mul param1 (slice q a_opp a)) (add (mul param3 (counter (div "
        "(slice opp) (sum (slice opp))))) (mul param4 (onehot a))))))\n",
        {0.0, 1.0, 1.5, 3.0, 0.8}}},
      {"gemini_sbb",
       {"(program gemini_sbb\n"
        "  (params 5)\n"
        "  (state q (shape 3 3 3) (init 0) (at prev_a_opp prev_a)\n"
        "    (ema (slice q prev_a_opp prev_a) cfr unit0))\n"
        "  (state opp (shape 3 3) (init 0) (at prev_a_opp)\n"
        "    (add (decay (slice opp prev_a_opp) unit2) (onehot a_opp)))\n"
        "  (policy (add (mul param1 (slice q a_opp a)) (add (mul param3 (counter (div "
        "(slice opp a_opp) (sum (slice opp a_opp))))) (mul param4 (onehot a))))))\n",
        {0.0, 0.8, 2.0, 3.0, 0.8}}},
      {"gpt51_sbb",
       {"(program gpt51_sbb\n"
        "  (params 4)\n"
        "  (state q (shape 3 3 3) (init 0) (at prev_a_opp prev_a a)\n"
        "    (ema (slice q prev_a_opp prev_a a) r unit0))\n"
        "  (state opp (shape 3 3 3) (init 0) (at prev_a_opp prev_a)\n"
        "    (add (decay (slice opp prev_a_opp prev_a) unit2) (onehot a_opp)))\n"
        "  (policy (add (mul param1 (slice q a_opp a)) (mul param3 (counter (div (slice "
        "opp a_opp a) (sum (slice opp a_opp a))))))))\n",
        {0.0, 1.0, 2.0, 3.5}}},
      {"gptoss_sbb",
       {"(program gptoss_sbb\n"
        "  (params 5)\n"
        "  (state q (shape 3) (init 0) (at a)\n"
        "    (ema (slice q a) r unit0))\n"
        "  (state opp (shape 3) (init 0) (at)\n"
        "    (add (decay (slice opp) unit2) (onehot a_opp)))\n"
        "  (policy (add (mul param1 (slice q)) (add (mul param3 (counter (div (slice opp) "
        "(sum (slice opp))))) (mul param4 (onehot a))))))\n",
        {-1.0, 1.0, 1.0, 2.5, 0.8}}},
  };
  return *table;
}

const Entry& Lookup(const std::string& name) {
  auto it = Table().find(name);
  if (it == Table().end()) throw Error("unknown builtin program '" + name + "'");
  return it->second;
}

}  // namespace

std::vector<std::string> BuiltinNames() {
  return {"nash", "human_sbb", "gemini_sbb", "gpt51_sbb", "gptoss_sbb"};
}

const std::string& BuiltinSource(const std::string& name) { return Lookup(name).source; }

Program Builtin(const std::string& name) { return Parse(BuiltinSource(name)); }

std::vector<double> BuiltinReferenceTheta(const std::string& name) {
  return Lookup(name).theta;
}

}  // namespace irps::dsl
