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

#include <sstream>

#include "irps/dsl/text.h"
#include "irps/dsl/validate.h"
#include "irps/error.h"
#include "irps/http_client.h"
#include "irps/mutator.h"
#include "json.hpp"

namespace irps {
namespace {

constexpr const char* kGrammar = R"(Programs describe a player of iterated rock-paper-scissors
(actions 0=rock, 1=paper, 2=scissors; rewards: win 3, tie 0, loss -1).

(program NAME
  (params N)                         ; N <= 10 real parameters
  (state NAME (shape 3 ...) (init X) (at IDX ...) UPDATE)   ; rank 0..3
  (policy EXPR))                     ; 3 logits for the next move

After each round every state slice addressed by `at` is replaced by UPDATE
(all updates read the values from before the round). The policy is then
evaluated to give logits for the following round.

Leaves: numbers, [x y z], r (reward), cfr (reward each action would have
earned against the opponent's move), paramK (raw), unitK (sigmoid, in
[0,1]), posK (softplus, > 0).
Index variables: a, a_opp (this round's moves), prev_a, prev_a_opp (the round
before), _ (keep the axis).
Operators: (slice S IDX...), (onehot IDX), (add x y), (sub x y), (mul x y),
(div x y), (ema old new rate), (decay x rate), (counter v) (maps a forecast
of the opponent's move onto the move beating it), (softmax v temp), (sum v).
Rates must be constants in [0,1] or unitK; softmax temperatures positive
constants, posK or unitK.)";

}  // namespace

std::string BuildMutationPrompt(const Candidate& parent,
                                std::span<const Candidate* const> inspirations) {
  std::ostringstream out;
  out << "You are improving a behavioral model written in a small Lisp-like language.\n\n"
      << kGrammar << "\n\n";
  out << "Higher likelihood is better; lower effort means a simpler program.\n\n";
  out << "Parent program (likelihood " << parent.train_score << ", effort " << parent.effort
      << "):\n"
      << parent.text << "\n";
  for (std::size_t i = 0; i < inspirations.size(); ++i) {
    const Candidate& c = *inspirations[i];
    out << "Reference program " << i + 1 << " (likelihood " << c.train_score << ", effort "
        << c.effort << "):\n"
        << c.text << "\n";
  }
  out << "Propose one modified version of the parent that predicts the player better or is "
         "simpler. Reply with a single (program ...) form and nothing else.\n";
  return out.str();
}

std::optional<std::string> ExtractProgramText(const std::string& reply) {
  const auto start = reply.find("(program");
  if (start == std::string::npos) return std::nullopt;
  int depth = 0;
  bool comment = false;
  for (std::size_t i = start; i < reply.size(); ++i) {
    const char c = reply[i];
    if (comment) {
      if (c == '\n') comment = false;
      continue;
    }
    if (c == ';') {
      comment = true;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return reply.substr(start, i - start + 1);
    }
  }
  return std::nullopt;
}

PromptTransport HttpPromptTransport(const ExternalMutatorConfig& cfg) {
  return [cfg](const std::string& prompt) {
    const nlohmann::json request = {{"prompt", prompt}};
    const HttpResponse res =
        HttpPost(cfg.url, request.dump(), BearerFromEnv(cfg.api_key_env), cfg.timeout_seconds);
    if (res.status != 200) throw Error("mutator endpoint returned HTTP " + std::to_string(res.status));
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res.body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("mutator endpoint sent invalid JSON: ") + e.what());
    }
    if (!reply.is_object() || !reply.contains("text") || !reply.at("text").is_string()) {
      throw Error("mutator endpoint reply has no string field 'text'");
    }
    return reply.at("text").get<std::string>();
  };
}

ExternalMutator::ExternalMutator(PromptTransport transport) : transport_(std::move(transport)) {}

Proposal ExternalMutator::Propose(const Candidate& parent,
                                  std::span<const Candidate* const> inspirations, Rng& rng) {
  std::string error;
  try {
    const std::string reply = transport_(BuildMutationPrompt(parent, inspirations));
    const auto text = ExtractProgramText(reply);
    if (!text) throw Error("reply contains no (program ...) form");
    dsl::Program program = dsl::Parse(*text);
    dsl::CheckValid(program);
    Proposal p;
    p.program = std::move(program);
    p.tag = "external";
    return p;
  } catch (const Error& e) {
    error = e.what();
  } catch (const std::exception& e) {
    error = e.what();
  }
  ++failures_;
  Proposal p = fallback_.Propose(parent, inspirations, rng);
  p.external_failure = true;
  p.error = error;
  return p;
}

}  // namespace irps
