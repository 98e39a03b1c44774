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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "irps/bots.h"
#include "irps/dataset.h"
#include "irps/discovery.h"
#include "irps/dsl/builtins.h"
#include "irps/dsl/halstead.h"
#include "irps/evaluation.h"
#include "irps/game.h"
#include "irps/models.h"
#include "irps/mutator.h"
#include "irps/objective.h"
#include "irps/rng.h"
#include "irps/simulate.h"
#include "irps/stats.h"

namespace irps {
namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects failures; only the first few messages are kept.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    pass_ = false;
    if (failures_++ < 4) msgs_ << (failures_ > 1 ? "; " : "") << what;
  }
  void Note(const std::string& s) { notes_ << (notes_.tellp() > 0 ? ", " : "") << s; }
  Verdict Done() const {
    std::string d = notes_.str();
    if (!pass_) d += (d.empty() ? "" : " | ") + msgs_.str();
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::ostringstream msgs_, notes_;
};

std::string Fmt(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

int Jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// n games against the roster in rotation.
std::vector<GameTrajectory> RotatingGames(const AgentSpec& agent, int n, std::uint64_t seed) {
  const std::vector<BotSpec> roster = DefaultRoster();
  const int k = static_cast<int>(roster.size());
  std::vector<GameTrajectory> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(SimulateGame(agent, roster[i % k], i / k, kDefaultRounds, seed, agent.Label()));
  }
  return out;
}

AgentSpec BuiltinAgent(const std::string& name) {
  return AgentSpec::FromModel(Model::FromProgram(dsl::Builtin(name)),
                              dsl::BuiltinReferenceTheta(name));
}

Dataset GenerateFromBuiltin(const std::string& name, int games_per_bot, std::uint64_t seed) {
  SimulateConfig sc;
  sc.games_per_bot = games_per_bot;
  sc.seed = seed;
  sc.jobs = Jobs();
  return SimulateGames(BuiltinAgent(name), DefaultRoster(), sc);
}

Verdict NashScore() {
  Checker c;
  for (const AgentSpec& agent : {AgentSpec::Random(), AgentSpec::Oracle()}) {
    const std::vector<GameTrajectory> games = RotatingGames(agent, 100, 5);
    const EvalScore s = TwofoldCv(Model::Nash(), games, FitConfig{}, 1);
    c.Expect(std::abs(s.normalized_likelihood - 1.0 / 3.0) <= 1e-9,
             agent.Label() + " gave " + Fmt("%.12f", s.normalized_likelihood));
    c.Note(agent.Label() + "=" + Fmt("%.12f", s.normalized_likelihood));
  }
  return c.Done();
}

Verdict PayoffTable() {
  Checker c;
  // Rows are the ego move R, P, S; columns the opponent move.
  const int table[3][3] = {{0, -1, 3}, {3, 0, -1}, {-1, 3, 0}};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const Action x = ActionFromInt(a), y = ActionFromInt(b);
      const Payoff p = PayoffOf(x, y);
      c.Expect(p.ego == table[a][b] && p.opp == table[b][a], "payoff " + std::to_string(a * 3 + b));
      const Outcome o = OutcomeOf(x, y);
      if (a == b) {
        c.Expect(o == Outcome::kTie && p.ego == 0, "tie");
      } else if (Beats(y) == x) {
        c.Expect(o == Outcome::kWin && p.ego == 3, "win");
      } else {
        c.Expect(o == Outcome::kLoss && Beats(x) == y && p.ego == -1, "loss");
      }
    }
  }
  return c.Done();
}

Verdict Transitions() {
  Checker c;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const Action from = ActionFromInt(a), to = ActionFromInt(b);
      const TransitionKind k = ClassifyTransition(from, to);
      const TransitionKind want = b == a             ? TransitionKind::kNil
                                  : b == (a + 1) % 3 ? TransitionKind::kPositive
                                                     : TransitionKind::kNegative;
      c.Expect(k == want, "classify");
      c.Expect(ApplyTransition(from, k) == to, "apply(classify)");
    }
    for (TransitionKind k :
         {TransitionKind::kPositive, TransitionKind::kNegative, TransitionKind::kNil}) {
      c.Expect(ClassifyTransition(ActionFromInt(a), ApplyTransition(ActionFromInt(a), k)) == k,
               "classify(apply)");
    }
  }
  return c.Done();
}

Verdict BotExploitability() {
  Checker c;
  SimulateConfig sc;
  sc.games_per_bot = 20;
  sc.seed = 1;
  sc.jobs = Jobs();
  const std::vector<BotSpec> roster = DefaultRoster();
  const Dataset d = SimulateGames(AgentSpec::Oracle(), roster, sc);
  const WinRateStats s = ComputeWinRates(d.games);
  double worst = 1.0, worst_nonadaptive = 1.0, best_nonadaptive = 0.0;
  for (const BotSpec& bot : roster) {
    const double w = s.per_bot.at(bot.bot_id).mean;
    worst = std::min(worst, w);
    c.Expect(w > 1.0 / 3.0 + 0.05, "bot " + std::to_string(bot.bot_id) + " " + Fmt("%.3f", w));
    if (bot.bot_class == BotClass::kNonadaptive) {
      worst_nonadaptive = std::min(worst_nonadaptive, w);
      best_nonadaptive = std::max(best_nonadaptive, w);
      c.Expect(std::abs(w - 0.933) <= 0.02,
               "nonadaptive bot " + std::to_string(bot.bot_id) + " " + Fmt("%.3f", w));
    }
  }
  c.Note("min " + Fmt("%.3f", worst));
  c.Note("nonadaptive " + Fmt("%.3f", worst_nonadaptive) + ".." + Fmt("%.3f", best_nonadaptive));
  return c.Done();
}

Verdict RandomBaseline() {
  Checker c;
  const std::vector<GameTrajectory> games = RotatingGames(AgentSpec::Random(), 100, 2);
  const double w = ComputeWinRates(games).aggregate.mean;
  c.Expect(std::abs(w - 1.0 / 3.0) <= 0.02, "aggregate " + Fmt("%.4f", w));
  c.Note("aggregate " + Fmt("%.4f", w));
  return c.Done();
}

Verdict EwaHandCheck() {
  Checker c;
  CsEwaParams p;
  p.alpha = 0.5;
  p.alpha_prime = 0.5;
  p.phi_ewa = 1.0;
  p.rho = 1.0;
  p.beta = 1.0;
  // Paper against Rock from zero attractions and N = 1.
  const std::array<double, 3> payoffs = {0.0, 3.0, -1.0};
  const double want[2][3] = {{0.0, 1.5, 0.0}, {0.0, 1.5, -0.5}};
  for (int delta = 0; delta <= 1; ++delta) {
    p.delta = delta;
    std::array<double, 3> a{};
    double n = 1.0;
    CsEwaUpdateRow(a, n, p, ToInt(Action::kPaper), payoffs);
    // A' = (phi N A + [delta + (1 - delta) 1{chosen}] pi) / N', N' = rho N + 1.
    std::array<double, 3> oracle{};
    for (int j = 0; j < 3; ++j) {
      const double weight = delta + (1 - delta) * (j == 1 ? 1.0 : 0.0);
      oracle[j] = weight * payoffs[j] / (p.rho + 1.0);
    }
    for (int j = 0; j < 3; ++j) {
      c.Expect(std::abs(a[j] - want[delta][j]) <= 1e-12 && std::abs(a[j] - oracle[j]) <= 1e-12,
               "delta " + std::to_string(delta) + " j " + std::to_string(j));
    }
  }
  return c.Done();
}

Verdict GradientFidelity() {
  Checker c;
  Rng rng(2024);
  std::vector<std::string> specs = {"csewa"};
  for (const std::string& n : dsl::BuiltinNames()) specs.push_back("builtin:" + n);
  double worst = 0.0;
  for (const std::string& spec : specs) {
    const Model m = Model::FromSpec(spec);
    for (int k = 0; k < 10; ++k) {
      // A 50-round trajectory against a random roster bot.
      const BotSpec& bot = DefaultRoster()[rng.UniformInt(15)];
      const std::vector<GameTrajectory> games = {
          SimulateGame(AgentSpec::Random(), bot, k, 50, rng.UniformInt(1 << 30), "fd")};
      std::vector<double> theta(m.param_count());
      for (double& v : theta) v = 0.5 * rng.Normal();
      const NllGrad g = NllAndGradient(m, theta, games);
      for (int i = 0; i < m.param_count(); ++i) {
        std::vector<double> hi = theta, lo = theta;
        hi[i] += 1e-5;
        lo[i] -= 1e-5;
        const double fd = (Nll(m, hi, games).nll - Nll(m, lo, games).nll) / 2e-5;
        const double rel = std::abs(fd - g.grad[i]) / std::max(1.0, std::abs(fd));
        worst = std::max(worst, rel);
        c.Expect(rel <= 1e-4, spec + " param " + std::to_string(i) + " rel " + Fmt("%.2e", rel));
      }
    }
  }
  c.Note("max rel err " + Fmt("%.2e", worst));
  return c.Done();
}

Verdict HalsteadChecks() {
  Checker c;
  const dsl::HalsteadReport r = dsl::HalsteadFromCounts(2, 3, 4, 5);
  const double v = 9.0 * std::log2(5.0), d = (2.0 / 2.0) * (5.0 / 3.0);
  c.Expect(std::abs(r.volume - v) <= 1e-3 && std::abs(r.volume - 20.897) <= 1e-3, "volume");
  c.Expect(std::abs(r.difficulty - d) <= 1e-3, "difficulty");
  c.Expect(std::abs(r.effort - d * v) <= 1e-3 && std::abs(r.effort - 34.83) <= 1e-2, "effort");
  const double e_gptoss = dsl::Halstead(dsl::Builtin("gptoss_sbb")).effort;
  const double e_human = dsl::Halstead(dsl::Builtin("human_sbb")).effort;
  const double e_gpt51 = dsl::Halstead(dsl::Builtin("gpt51_sbb")).effort;
  c.Expect(e_gptoss < e_human && e_human < e_gpt51, "ordering");
  c.Note("E=" + Fmt("%.3f", r.effort));
  c.Note("gptoss " + Fmt("%.0f", e_gptoss) + " < human " + Fmt("%.0f", e_human) + " < gpt51 " +
         Fmt("%.0f", e_gpt51));
  return c.Done();
}

Verdict Recovery() {
  Checker c;
  const std::string name = "gemini_sbb";
  Dataset d = GenerateFromBuiltin(name, 3, 7);
  d.games.resize(40);
  const Partition split = PartitionGames(d.games);
  SearchConfig cfg;
  cfg.budget = 500;
  cfg.seed = 11;
  cfg.jobs = Jobs();
  RuleMutator mutator;
  const SearchResult result = Evolve(split.train, cfg, mutator);
  const std::map<std::string, double> eval =
      ScoreFrontier(result.archive, split.eval, cfg.fit, cfg.seed, cfg.jobs);
  const SbbResult sbb = SelectSbb(result.archive, eval, cfg.epsilon);
  const Candidate& best = result.archive.Get(sbb.id);

  // The generator is scored exactly like a frontier member.
  const dsl::Program generator = dsl::Builtin(name);
  const double gen_eval = TwofoldCv(Model::FromProgram(generator), split.eval, cfg.fit,
                                    DeriveSeed(cfg.seed, "eval"),
                                    DeriveSeed(cfg.seed, ProgramId(generator)))
                              .normalized_likelihood;
  const double gen_effort = dsl::Halstead(generator).effort;
  const double sbb_eval = eval.at(sbb.id);
  c.Expect(std::abs(sbb_eval - gen_eval) <= 0.01,
           "eval gap " + Fmt("%.4f", sbb_eval - gen_eval));
  c.Expect(best.effort <= 1.25 * gen_effort,
           "effort " + Fmt("%.1f", best.effort) + " vs " + Fmt("%.1f", gen_effort));
  c.Note("archive " + std::to_string(result.archive.size()));
  c.Note("sbb eval " + Fmt("%.4f", sbb_eval) + " vs generator " + Fmt("%.4f", gen_eval));
  c.Note("effort " + Fmt("%.1f", best.effort) + " vs " + Fmt("%.1f", gen_effort));
  return c.Done();
}

Candidate Synthetic(int i, double score, double effort) {
  Candidate c;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016x", i);
  c.id = buf;
  c.program = dsl::Builtin("nash");
  c.train_score = score;
  c.effort = effort;
  return c;
}

Verdict ParetoSbb() {
  Checker c;
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Archive archive;
    std::vector<FrontierPoint> points;
    for (int i = 0; i < 1000; ++i) {
      const double score = 0.3 + rng.UniformInt(80) * 0.001;
      const double effort = rng.UniformInt(300) * 3.0;
      Candidate cand = Synthetic(trial * 100000 + i, score, effort);
      points.push_back({cand.id, score, effort});
      archive.Add(std::move(cand));
    }
    std::set<std::string> got, brute;
    for (const Candidate* f : archive.Frontier()) got.insert(f->id);
    for (int k : BruteForceFrontier(points)) brute.insert(points[k].id);
    c.Expect(got == brute, "frontier mismatch in trial " + std::to_string(trial));
  }

  Archive toy;
  toy.Add(Synthetic(1, 0.400, 100));
  toy.Add(Synthetic(2, 0.398, 50));
  toy.Add(Synthetic(3, 0.370, 10));
  std::map<std::string, double> toy_eval;
  for (const Candidate& cand : toy.candidates()) toy_eval[cand.id] = cand.train_score;
  c.Expect(toy.Get(SelectSbb(toy, toy_eval, 0.005).id).effort == 50.0, "toy picks effort 50");

  for (int trial = 0; trial < 20; ++trial) {
    Archive a;
    for (int i = 0; i < 300; ++i) {
      a.Add(Synthetic(trial * 1000 + i, 0.3 + 0.1 * rng.Uniform(), 1000 * rng.Uniform()));
    }
    std::map<std::string, double> eval;
    for (const Candidate* f : a.Frontier()) eval[f->id] = f->train_score - 0.01 * rng.Uniform();
    double last = 1e300;
    for (double eps : {0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.2}) {
      const double e = a.Get(SelectSbb(a, eval, eps).id).effort;
      c.Expect(e <= last, "monotonicity");
      last = e;
    }
  }
  return c.Done();
}

Verdict CrossGeneralizationDiagonal() {
  Checker c;
  const std::vector<std::string> names = {"human_sbb", "gemini_sbb", "gptoss_sbb"};
  std::vector<NamedModel> programs;
  std::vector<NamedDataset> datasets;
  for (std::size_t i = 0; i < names.size(); ++i) {
    programs.push_back({names[i], Model::FromProgram(dsl::Builtin(names[i]))});
    datasets.push_back({names[i], GenerateFromBuiltin(names[i], 2, 100 + i).games});
  }
  FitConfig fit;
  fit.restarts = 3;
  const XgenMatrix m = CrossGeneralization(programs, datasets, fit, 17, Jobs());
  for (std::size_t r = 0; r < names.size(); ++r) {
    std::ostringstream row;
    for (std::size_t k = 0; k < names.size(); ++k) {
      row << (k ? "/" : "") << Fmt("%.4f", m.cell(r, k).normalized_likelihood);
    }
    c.Note(names[r] + " " + row.str());
    c.Expect(m.RowArgmax(static_cast<int>(r)) == static_cast<int>(r),
             "row " + names[r] + " peaks off the diagonal");
  }
  return c.Done();
}

Verdict Preprocessing() {
  Checker c;
  using nlohmann::json;
  auto round = [](int t, std::optional<int> ego, std::optional<int> opp,
                  std::optional<int> reward) {
    return json{{"t", t},
                {"ego", ego ? json(*ego) : json(nullptr)},
                {"opp", opp ? json(*opp) : json(nullptr)},
                {"reward", reward ? json(*reward) : json(nullptr)}};
  };
  // Scissors against Paper every round.
  auto game = [&](const std::string& id, int n) {
    json rounds = json::array();
    for (int t = 0; t < n; ++t) rounds.push_back(round(t, 2, 1, 3));
    return json{{"game_id", id}, {"agent_label", "human"}, {"bot_id", 5}, {"rounds", rounds}};
  };
  std::ostringstream raw;
  raw << game("g49", 49).dump() << "\n" << game("g50", 50).dump() << "\n";
  json eleven = game("missing11", 300);
  for (int t = 100; t < 111; ++t) eleven["rounds"][t] = round(t, std::nullopt, 0, std::nullopt);
  raw << eleven.dump() << "\n";
  json ten = game("missing10", 300);
  for (int t = 0; t < 10; ++t) ten["rounds"][t * 20] = round(t * 20, std::nullopt, std::nullopt, std::nullopt);
  // Deducible, but still one of the ten.
  ten["rounds"][20] = round(20, std::nullopt, 1, 3);
  raw << ten.dump() << "\n";

  DatasetHeader h;
  h.agent_label = "human";
  const PreprocessResult r = Preprocess(ParseRawGames(raw.str()), PreprocessConfig{}, h);
  std::vector<std::string> ids;
  for (const GameTrajectory& g : r.dataset.games) ids.push_back(g.game_id);
  c.Expect(ids == std::vector<std::string>{"g50", "missing10"}, "kept games");
  if (ids.size() == 2) {
    const GameTrajectory& g = r.dataset.games[1];
    for (int t = 0; t < 10; ++t) {
      if (t == 1) continue;
      const RoundRecord& rr = g.rounds[t * 20];
      c.Expect(rr.ego == Action::kRock && rr.opp == Action::kRock && rr.reward == 0,
               "imputation at " + std::to_string(t * 20));
    }
    c.Expect(g.rounds[20].ego == Action::kScissors && g.rounds[20].reward == 3, "deduced move");
    c.Expect(r.dataset.games[0].T() == kDefaultRounds && r.dataset.games[0].padded_from == 50,
             "padding");
  }
  c.Expect(DeduceEgo(Action::kPaper, 3) == Action::kScissors, "deduction example");
  const PreprocessResult again = Preprocess(r.dataset, PreprocessConfig{});
  c.Expect(again.dataset == r.dataset, "idempotence");
  c.Note(std::to_string(r.report.games_in) + " in, " + std::to_string(r.report.games_out) + " out");
  return c.Done();
}

Verdict Wilcoxon() {
  Checker c;
  // d = x - y = {-2, 1, -4, 3, 5}; ranks 1..5, so W- = 2 + 4 = 6.
  const std::vector<double> x = {8, 11, 6, 13, 15};
  const std::vector<double> y = {10, 10, 10, 10, 10};
  const WilcoxonResult r = WilcoxonSignedRank(x, y);
  c.Expect(r.n == 5 && r.w_minus == 6.0 && r.w_plus == 9.0, "hand example W- " +
                                                                Fmt("%.1f", r.w_minus));
  std::vector<double> a(20), b(20, 0.0);
  for (int i = 0; i < 20; ++i) a[i] = 0.1 * (i + 1);
  const WilcoxonResult all = WilcoxonSignedRank(a, b);
  // W- = 0, mean 105, sd sqrt(20 * 21 * 41 / 24).
  const double z = (0.0 - 105.0) / std::sqrt(20.0 * 21.0 * 41.0 / 24.0);
  const double p = 2.0 * 0.5 * std::erfc(-z / std::sqrt(2.0));
  c.Expect(all.p < 0.001 && std::abs(all.p - p) <= 1e-9, "all positive p " + Fmt("%.2e", all.p));
  c.Note("W-=" + Fmt("%.1f", r.w_minus) + ", p=" + Fmt("%.2e", all.p));
  return c.Done();
}

Verdict ReplayFidelity() {
  Checker c;
  const std::string name = "human_sbb";
  const Dataset d = GenerateFromBuiltin(name, 2, 31);
  const ReplayResult r = ReplayEval(Model::FromProgram(dsl::Builtin(name)),
                                    dsl::BuiltinReferenceTheta(name), d.games, 5);
  const double synth = r.synthetic_stats.aggregate.mean;
  const double truth = r.ground_truth_stats.aggregate.mean;
  c.Expect(std::abs(synth - truth) <= 0.05, "gap " + Fmt("%.4f", synth - truth));
  c.Note("replayed " + Fmt("%.4f", synth) + " vs recorded " + Fmt("%.4f", truth));
  return c.Done();
}

struct Criterion {
  std::string name;
  double limit_seconds;  // 0 for no runtime bound
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace irps

int main() {
  using irps::Criterion;
  const std::vector<Criterion> criteria = {
      {"nash_score", 5, irps::NashScore},
      {"payoff_table", 1, irps::PayoffTable},
      {"transition_algebra", 1, irps::Transitions},
      {"bot_exploitability", 30, irps::BotExploitability},
      {"random_baseline", 30, irps::RandomBaseline},
      {"ewa_hand_check", 1, irps::EwaHandCheck},
      {"gradient_fidelity", 60, irps::GradientFidelity},
      {"halstead", 1, irps::HalsteadChecks},
      {"recovery", 1800, irps::Recovery},
      {"pareto_sbb", 10, irps::ParetoSbb},
      {"xgen_diagonal", 600, irps::CrossGeneralizationDiagonal},
      {"preprocessing", 1, irps::Preprocessing},
      {"wilcoxon", 1, irps::Wilcoxon},
      {"replay_fidelity", 0, irps::ReplayFidelity},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    irps::Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      v.pass = false;
      v.detail += " | over the " + irps::Fmt("%.0f", c.limit_seconds) + " s budget";
    }
    if (!v.pass) ++failed;
    std::printf("%s %-20s %8.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
