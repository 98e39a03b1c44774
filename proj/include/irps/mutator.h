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

// Program mutators for the discovery loop.
//
// The rule mutator edits ASTs directly from a fixed catalog. The external
// mutator asks an HTTP endpoint for a rewritten program and falls back to
// the rule mutator whenever the reply is unusable.

#ifndef IRPS_MUTATOR_H_
#define IRPS_MUTATOR_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irps/discovery.h"
#include "irps/dsl/ast.h"
#include "irps/rng.h"

namespace irps {

struct Proposal {
  dsl::Program program;
  std::string tag;
  bool fallback = false;          // the catalog gave up and returned a tweak
  bool external_failure = false;  // external reply rejected, rule used instead
  std::string error;              // why the external reply was rejected
};

class Mutator {
 public:
  virtual ~Mutator() = default;
  // The result always passes dsl::Validate.
  virtual Proposal Propose(const Candidate& parent,
                           std::span<const Candidate* const> inspirations, Rng& rng) = 0;
};

// Drops states the policy never reaches and renumbers parameters densely in
// order of first use.
dsl::Program NormalizeProgram(dsl::Program program);

class RuleMutator : public Mutator {
 public:
  static constexpr int kMaxDraws = 10;

  // raise_rank, lower_rank, add_stickiness, remove_term, swap_index,
  // change_op, insert_ema, remove_ema, graft, perturb_const,
  // add_opponent_model, add_q_vector, add_cf_q_vector.
  static const std::vector<std::string>& Catalog();

  // One catalog entry; nullopt when it does not apply or the result does not
  // validate. Throws Error for a tag outside the catalog.
  static std::optional<dsl::Program> Apply(const std::string& tag,
                                           const dsl::Program& parent,
                                           std::span<const dsl::Program* const> inspirations,
                                           Rng& rng);

  Proposal Propose(const Candidate& parent, std::span<const Candidate* const> inspirations,
                   Rng& rng) override;
};

struct ExternalMutatorConfig {
  std::string url;  // full endpoint URL
  // Name of the environment variable holding a bearer token; empty sends no
  // Authorization header.
  std::string api_key_env;
  double timeout_seconds = 60.0;
};

// Sends a prompt, returns the reply text. Throws Error on transport failure.
using PromptTransport = std::function<std::string(const std::string& prompt)>;

// Posts {"prompt": ...} and reads {"text": ...}.
PromptTransport HttpPromptTransport(const ExternalMutatorConfig& cfg);

// Prompt listing the grammar, the parent and the inspirations with scores.
std::string BuildMutationPrompt(const Candidate& parent,
                                std::span<const Candidate* const> inspirations);

// First balanced "(program ...)" form in a free-text reply.
std::optional<std::string> ExtractProgramText(const std::string& reply);

class ExternalMutator : public Mutator {
 public:
  explicit ExternalMutator(PromptTransport transport);

  Proposal Propose(const Candidate& parent, std::span<const Candidate* const> inspirations,
                   Rng& rng) override;

  int failures() const { return failures_; }

 private:
  PromptTransport transport_;
  RuleMutator fallback_;
  int failures_ = 0;
};

}  // namespace irps

#endif  // IRPS_MUTATOR_H_
