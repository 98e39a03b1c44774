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
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "irps/discovery.h"
#include "irps/dsl/text.h"
#include "irps/error.h"
#include "irps/rng.h"

namespace irps {

std::string ProgramId(const dsl::Program& program) {
  dsl::Program p = program;
  p.name = "_";
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, Fnv1a64(dsl::Serialize(p)));
  return buf;
}

bool Dominates(double score_a, double effort_a, double score_b, double effort_b) {
  return score_a >= score_b && effort_a <= effort_b &&
         (score_a > score_b || effort_a < effort_b);
}

namespace {

// a shadows b: a dominates b, or ties it exactly and has the smaller id.
bool Shadows(const FrontierPoint& a, const FrontierPoint& b) {
  if (Dominates(a.score, a.effort, b.score, b.effort)) return true;
  return a.score == b.score && a.effort == b.effort && a.id < b.id;
}

FrontierPoint PointOf(const Candidate& c) { return {c.id, c.train_score, c.effort}; }

}  // namespace

std::vector<int> BruteForceFrontier(std::span<const FrontierPoint> points) {
  std::vector<int> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (i != j && Shadows(points[j], points[i])) keep = false;
    }
    if (keep) out.push_back(static_cast<int>(i));
  }
  return out;
}

bool Archive::Add(Candidate candidate) {
  if (by_id_.count(candidate.id)) return false;
  const int pos = static_cast<int>(candidates_.size());
  candidate.index = pos;
  const FrontierPoint p = PointOf(candidate);
  by_id_.emplace(candidate.id, pos);
  candidates_.push_back(std::move(candidate));
  for (int f : frontier_) {
    if (Shadows(PointOf(candidates_[f]), p)) return true;
  }
  std::vector<int> next;
  next.reserve(frontier_.size() + 1);
  for (int f : frontier_) {
    if (!Shadows(p, PointOf(candidates_[f]))) next.push_back(f);
  }
  next.push_back(pos);
  frontier_ = std::move(next);
  return true;
}

const Candidate& Archive::Get(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error("no candidate with id " + id);
  return candidates_[it->second];
}

std::vector<const Candidate*> Archive::Frontier() const {
  std::vector<const Candidate*> out;
  for (int f : frontier_) out.push_back(&candidates_[f]);
  return out;
}

std::vector<int> Archive::FrontierIndices() const { return frontier_; }

nlohmann::json Archive::CandidateToJson(const Candidate& c) {
  nlohmann::ordered_json j;
  j["id"] = c.id;
  j["index"] = c.index;
  j["name"] = c.program.name;
  j["program"] = c.text;
  j["train_score"] = c.train_score;
  j["train_nll"] = c.train_nll;
  j["predictions"] = c.predictions;
  j["effort"] = c.effort;
  j["halstead"] = {{"eta1", c.halstead.eta1}, {"eta2", c.halstead.eta2},
                   {"n1", c.halstead.n1},     {"n2", c.halstead.n2},
                   {"volume", c.halstead.volume}, {"difficulty", c.halstead.difficulty},
                   {"effort", c.halstead.effort}};
  j["param_count"] = c.program.param_count;
  j["parent"] = c.parent_id;
  j["mutation"] = c.mutation;
  j["fit_seed"] = c.fit_seed;
  return j;
}

Candidate Archive::CandidateFromJson(const nlohmann::json& j) {
  Candidate c;
  try {
    c.text = j.at("program").get<std::string>();
    c.program = dsl::Parse(c.text);
    c.id = j.at("id").get<std::string>();
    c.index = j.value("index", 0);
    c.train_score = j.at("train_score").get<double>();
    c.train_nll = j.value("train_nll", 0.0);
    c.predictions = j.value("predictions", 0L);
    c.effort = j.at("effort").get<double>();
    c.halstead = dsl::Halstead(c.program);
    c.parent_id = j.value("parent", "");
    c.mutation = j.value("mutation", "");
    c.fit_seed = j.value("fit_seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("archive record: ") + e.what());
  }
  if (c.id != ProgramId(c.program)) {
    throw SchemaError("archive record id " + c.id + " does not match its program");
  }
  return c;
}

std::string Archive::ToJsonl() const {
  std::string out;
  for (const Candidate& c : candidates_) {
    out += CandidateToJson(c).dump();
    out += '\n';
  }
  return out;
}

Archive Archive::FromJsonl(std::string_view text) {
  Archive a;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      a.Add(CandidateFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(e.what(), number);
    } catch (const SchemaError& e) {
      throw SchemaError(e.what(), number);
    }
  }
  return a;
}

Archive Archive::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open archive " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJsonl(ss.str());
}

SbbResult SelectSbb(const Archive& archive, const std::map<std::string, double>& eval_scores,
                    double epsilon) {
  if (!(epsilon > 0)) throw Error("epsilon must be positive");
  if (archive.empty()) throw Error("SBB selection on an empty archive");
  SbbResult r;
  r.global_max = -std::numeric_limits<double>::infinity();
  for (const auto& [id, s] : eval_scores) r.global_max = std::max(r.global_max, s);
  const auto frontier = archive.Frontier();
  for (const Candidate* c : frontier) {
    if (!eval_scores.count(c->id)) {
      throw ContractViolation("frontier candidate " + c->id + " has no evaluation score");
    }
  }
  r.threshold = r.global_max - epsilon;
  const Candidate* best = nullptr;
  double best_frontier_score = -std::numeric_limits<double>::infinity();
  for (const Candidate* c : frontier) {
    const double s = eval_scores.at(c->id);
    best_frontier_score = std::max(best_frontier_score, s);
    if (!(s > r.threshold)) continue;
    r.eligible.push_back(c->id);
    if (best == nullptr || c->effort < best->effort ||
        (c->effort == best->effort && c->id < best->id)) {
      best = c;
    }
  }
  if (best == nullptr) {
    std::ostringstream msg;
    msg << "no frontier candidate within epsilon " << epsilon << " of the best score "
        << r.global_max << " (best frontier score " << best_frontier_score << ", gap "
        << r.global_max - best_frontier_score << ")";
    throw Error(msg.str());
  }
  r.id = best->id;
  return r;
}

// ---------------------------------------------------------------------------

SearchConfig::SearchConfig() {
  // Candidates are scored many times over, so the inner fit is lighter than
  // a standalone fit.
  fit.restarts = 2;
  fit.max_steps = 1500;
}

nlohmann::json SearchConfigToJson(const SearchConfig& c) {
  return {{"budget", c.budget},
          {"parents_per_step", c.parents_per_step},
          {"inspirations", c.inspirations},
          {"mutator", c.mutator == MutatorKind::kRule ? "rule" : "external"},
          {"epsilon", c.epsilon},
          {"seed", c.seed},
          {"frontier_bias", c.frontier_bias},
          {"max_stalled_steps", c.max_stalled_steps},
          {"fit", FitConfigToJson(c.fit)}};
}

SearchConfig SearchConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("search config must be a JSON object");
  SearchConfig c;
  try {
    c.budget = j.value("budget", c.budget);
    c.parents_per_step = j.value("parents_per_step", c.parents_per_step);
    c.inspirations = j.value("inspirations", c.inspirations);
    const std::string m = j.value("mutator", std::string("rule"));
    if (m == "rule") {
      c.mutator = MutatorKind::kRule;
    } else if (m == "external") {
      c.mutator = MutatorKind::kExternal;
    } else {
      throw SchemaError("search config: unknown mutator '" + m + "'");
    }
    c.epsilon = j.value("epsilon", c.epsilon);
    c.seed = j.value("seed", c.seed);
    c.frontier_bias = j.value("frontier_bias", c.frontier_bias);
    c.max_stalled_steps = j.value("max_stalled_steps", c.max_stalled_steps);
    if (j.contains("fit")) {
      nlohmann::json fit = FitConfigToJson(c.fit);
      fit.update(j.at("fit"));
      c.fit = FitConfigFromJson(fit);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("search config: ") + e.what());
  }
  if (c.budget < 1 || !(c.epsilon > 0) || c.parents_per_step < 1 || c.inspirations < 0 ||
      c.frontier_bias < 0 || c.frontier_bias > 1) {
    throw SchemaError("search config: budget >= 1, epsilon > 0, parents_per_step >= 1");
  }
  return c;
}

nlohmann::json SearchDiagnostics::ToJson() const {
  return {{"steps", steps},
          {"proposals", proposals},
          {"duplicates", duplicates},
          {"invalid", invalid},
          {"fit_failures", fit_failures},
          {"mutator_fallbacks", mutator_fallbacks},
          {"external_failures", external_failures},
          {"stalled", stalled}};
}

}  // namespace irps
