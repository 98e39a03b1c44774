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
#include <optional>
#include <set>

#include "irps/discovery.h"
#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"
#include "irps/dsl/validate.h"
#include "irps/error.h"
#include "irps/evaluation.h"
#include "irps/models.h"
#include "irps/mutator.h"
#include "irps/parallel.h"
#include "irps/rng.h"

namespace irps {

Candidate ScoreProgram(const dsl::Program& program, std::span<const GameTrajectory> train,
                       const SearchConfig& cfg) {
  Candidate c;
  c.program = program;
  c.id = ProgramId(program);
  c.text = dsl::Serialize(program);
  c.halstead = dsl::Halstead(program);
  c.effort = c.halstead.effort;
  c.fit_seed = DeriveSeed(cfg.seed, c.id);
  const Model model = Model::FromProgram(program);
  // Every candidate sees the same fold split; only the restarts differ.
  const EvalScore s =
      TwofoldCv(model, train, cfg.fit, DeriveSeed(cfg.seed, "split"), c.fit_seed);
  c.train_score = s.normalized_likelihood;
  c.train_nll = s.nll;
  c.predictions = s.predictions;
  return c;
}

namespace {

const Candidate* SampleParent(const Archive& archive, double frontier_bias, Rng& rng) {
  const auto frontier = archive.Frontier();
  if (rng.Uniform() < frontier_bias) {
    return frontier[rng.UniformInt(static_cast<int>(frontier.size()))];
  }
  return &archive.candidates()[rng.UniformInt(archive.size())];
}

std::vector<const Candidate*> SampleInspirations(const Archive& archive,
                                                 const Candidate* parent, int k, Rng& rng) {
  std::vector<int> pool;
  for (int i = 0; i < archive.size(); ++i) {
    if (&archive.candidates()[i] != parent) pool.push_back(i);
  }
  std::vector<const Candidate*> out;
  for (int i = 0; i < k && !pool.empty(); ++i) {
    const int j = rng.UniformInt(static_cast<int>(pool.size()));
    out.push_back(&archive.candidates()[pool[j]]);
    pool.erase(pool.begin() + j);
  }
  return out;
}

}  // namespace

SearchResult Evolve(std::span<const GameTrajectory> train, const SearchConfig& cfg,
                    Mutator& mutator, const CandidateSink& sink) {
  if (train.empty()) throw Error("discovery needs a non-empty training set");
  if (cfg.budget < 1) throw Error("budget must be >= 1");
  SearchResult result;
  Archive& archive = result.archive;
  SearchDiagnostics& diag = result.diagnostics;
  SearchConfig inner = cfg;
  inner.fit.jobs = 1;

  auto insert = [&](Candidate c) {
    if (!archive.Add(std::move(c))) return false;
    if (sink) sink(archive.candidates().back());
    return true;
  };

  Candidate seed = ScoreProgram(dsl::Builtin("nash"), train, inner);
  seed.mutation = "template";
  insert(std::move(seed));

  int stalled = 0;
  for (int step = 0; archive.size() < cfg.budget; ++step) {
    diag.steps = step + 1;
    Rng rng(DeriveSeed(cfg.seed, "step", static_cast<std::uint64_t>(step)));
    struct Child {
      dsl::Program program;
      std::string parent;
      std::string tag;
    };
    std::vector<Child> children;
    std::set<std::string> seen;
    for (int b = 0; b < cfg.parents_per_step; ++b) {
      const Candidate* parent = SampleParent(archive, cfg.frontier_bias, rng);
      const auto insp = SampleInspirations(archive, parent, cfg.inspirations, rng);
      Proposal p = mutator.Propose(*parent, insp, rng);
      ++diag.proposals;
      diag.mutator_fallbacks += p.fallback;
      diag.external_failures += p.external_failure;
      if (!dsl::Validate(p.program).empty()) {
        ++diag.invalid;
        continue;
      }
      const std::string id = ProgramId(p.program);
      if (archive.Contains(id) || !seen.insert(id).second) {
        ++diag.duplicates;
        continue;
      }
      p.program.name = "cand_" + id.substr(0, 8);
      children.push_back({std::move(p.program), parent->id, p.tag});
    }

    std::vector<std::optional<Candidate>> scored(children.size());
    ParallelFor(static_cast<int>(children.size()), cfg.jobs, [&](int i) {
      try {
        Candidate c = ScoreProgram(children[i].program, train, inner);
        c.parent_id = children[i].parent;
        c.mutation = children[i].tag;
        scored[i] = std::move(c);
      } catch (const Error&) {
        // Left empty; counted below.
      }
    });

    int added = 0;
    for (auto& c : scored) {
      if (archive.size() >= cfg.budget) break;
      if (!c) {
        ++diag.fit_failures;
        continue;
      }
      added += insert(std::move(*c));
    }
    stalled = added > 0 ? 0 : stalled + 1;
    if (stalled >= cfg.max_stalled_steps) {
      diag.stalled = true;
      break;
    }
  }
  return result;
}

std::map<std::string, double> ScoreFrontier(const Archive& archive,
                                            std::span<const GameTrajectory> eval,
                                            const FitConfig& fit, std::uint64_t seed, int jobs) {
  const std::vector<const Candidate*> front = archive.Frontier();
  std::vector<double> scores(front.size());
  ParallelFor(static_cast<int>(front.size()), jobs, [&](int i) {
    scores[i] = TwofoldCv(Model::FromProgram(front[i]->program), eval, fit,
                          DeriveSeed(seed, "eval"), DeriveSeed(seed, front[i]->id))
                    .normalized_likelihood;
  });
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < front.size(); ++i) out[front[i]->id] = scores[i];
  return out;
}

}  // namespace irps
