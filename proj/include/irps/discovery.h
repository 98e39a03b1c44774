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

// Evolutionary search over DSL programs with two objectives: cross-validated
// likelihood on the training games (higher is better) and Halstead effort
// (lower is better).

#ifndef IRPS_DISCOVERY_H_
#define IRPS_DISCOVERY_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "irps/dsl/ast.h"
#include "irps/dsl/halstead.h"
#include "irps/fitting.h"
#include "irps/game.h"
#include "json.hpp"

namespace irps {

class Mutator;

struct Candidate {
  std::string id;  // 16 hex digits, hash of the name-free canonical text
  dsl::Program program;
  std::string text;  // canonical serialization
  double train_score = 0.0;
  double train_nll = 0.0;
  long predictions = 0;
  double effort = 0.0;
  dsl::HalsteadReport halstead;
  std::string parent_id;  // empty for seeds
  std::string mutation;   // catalog tag, "template" for seeds
  int index = 0;          // insertion position
  std::uint64_t fit_seed = 0;
};

// Stable id of a program: the FNV-1a hash of its canonical text with the
// program name blanked, so renamed copies collide.
std::string ProgramId(const dsl::Program& program);

// True when a is at least as good on both axes and strictly better on one.
bool Dominates(double score_a, double effort_a, double score_b, double effort_b);

struct FrontierPoint {
  std::string id;
  double score = 0.0;
  double effort = 0.0;
};

// O(n^2) reference: points no other point dominates. Exact duplicates on
// both axes keep only the lowest id. Returned in input order.
std::vector<int> BruteForceFrontier(std::span<const FrontierPoint> points);

// Append-only candidate store with an incrementally maintained frontier.
class Archive {
 public:
  // False (and no change) when the id is already present.
  bool Add(Candidate candidate);

  bool Contains(const std::string& id) const { return by_id_.count(id) > 0; }
  const Candidate& Get(const std::string& id) const;
  const std::vector<Candidate>& candidates() const { return candidates_; }
  int size() const { return static_cast<int>(candidates_.size()); }
  bool empty() const { return candidates_.empty(); }

  // Frontier members in insertion order.
  std::vector<const Candidate*> Frontier() const;
  // Positions (into candidates()) of frontier members, ascending.
  std::vector<int> FrontierIndices() const;

  // One candidate per line.
  static nlohmann::json CandidateToJson(const Candidate& c);
  static Candidate CandidateFromJson(const nlohmann::json& j);
  std::string ToJsonl() const;
  static Archive FromJsonl(std::string_view text);
  static Archive Load(const std::filesystem::path& path);

 private:
  std::vector<Candidate> candidates_;
  std::unordered_map<std::string, int> by_id_;
  std::vector<int> frontier_;  // ascending positions
};

struct SbbResult {
  std::string id;
  double global_max = 0.0;
  double threshold = 0.0;  // global_max - epsilon
  std::vector<std::string> eligible;  // frontier ids above the threshold
};

// Simplest-but-best selection. Eligible frontier members have an evaluation
// score strictly above (max over every entry of eval_scores) - epsilon; the
// least effortful one wins, lowest id on ties. Throws ContractViolation when
// a frontier member has no score, Error when nothing is eligible.
SbbResult SelectSbb(const Archive& archive, const std::map<std::string, double>& eval_scores,
                    double epsilon);

enum class MutatorKind { kRule, kExternal };

struct SearchConfig {
  int budget = 500;
  int parents_per_step = 4;
  int inspirations = 2;
  MutatorKind mutator = MutatorKind::kRule;
  double epsilon = 0.005;
  std::uint64_t seed = 0;
  // Probability of drawing the parent from the frontier rather than the
  // whole archive.
  double frontier_bias = 0.7;
  // Steps in a row without a new candidate before the run gives up.
  int max_stalled_steps = 200;
  // Inner-loop fit used to score each candidate.
  FitConfig fit;
  int jobs = 1;

  SearchConfig();
};

nlohmann::json SearchConfigToJson(const SearchConfig& cfg);
SearchConfig SearchConfigFromJson(const nlohmann::json& j);

struct SearchDiagnostics {
  int steps = 0;
  int proposals = 0;
  int duplicates = 0;
  int invalid = 0;
  int fit_failures = 0;
  int mutator_fallbacks = 0;
  int external_failures = 0;
  bool stalled = false;
  nlohmann::json ToJson() const;
};

struct SearchResult {
  Archive archive;
  SearchDiagnostics diagnostics;
};

// Scores one program on the training games with two-fold CV.
Candidate ScoreProgram(const dsl::Program& program, std::span<const GameTrajectory> train,
                       const SearchConfig& cfg);

// Called after every insertion (e.g. to append to an archive file).
using CandidateSink = std::function<void(const Candidate&)>;

// Seeds the archive with the Nash template and grows it to cfg.budget
// candidates. Deterministic in (train, cfg, mutator behavior); cfg.jobs only
// changes wall time.
SearchResult Evolve(std::span<const GameTrajectory> train, const SearchConfig& cfg,
                    Mutator& mutator, const CandidateSink& sink = {});

// Held-out scores of every frontier member, keyed by id. Folds come from
// DeriveSeed(seed, "eval") and each candidate's fit from DeriveSeed(seed, id).
std::map<std::string, double> ScoreFrontier(const Archive& archive,
                                            std::span<const GameTrajectory> eval,
                                            const FitConfig& fit, std::uint64_t seed, int jobs);

}  // namespace irps

#endif  // IRPS_DISCOVERY_H_
