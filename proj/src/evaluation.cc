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

#include "irps/evaluation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "irps/error.h"
#include "irps/objective.h"
#include "irps/parallel.h"
#include "irps/rng.h"

namespace irps {
namespace {

int RecordedRounds(const GameTrajectory& g) {
  if (g.padded_from) return std::clamp(*g.padded_from, 0, g.T());
  return g.T();
}

MeanCi Summarize(std::span<const double> xs, const WinRateOptions& o, std::uint64_t salt) {
  if (o.bootstrap) return BootstrapMeanCi(xs, o.resamples, DeriveSeed(o.seed, salt));
  return NormalMeanCi(xs);
}

nlohmann::json CiJson(const MeanCi& ci) {
  return {{"mean", ci.mean}, {"half_width", ci.half_width}};
}

}  // namespace

Partition PartitionGames(std::span<const GameTrajectory> games) {
  Partition p;
  for (std::size_t i = 0; i < games.size(); ++i) {
    (i % 2 == 0 ? p.eval : p.train).push_back(games[i]);
  }
  return p;
}

double NormalizedLikelihood(double nll, long predictions) {
  if (predictions <= 0) throw Error("normalized likelihood needs at least one prediction");
  return std::exp(-nll / static_cast<double>(predictions));
}

std::vector<bool> TwofoldAssignment(int n_games, std::uint64_t seed) {
  std::vector<int> order(n_games);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(seed, "folds"));
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<bool> in_a(n_games, false);
  for (int i = 0; i < (n_games + 1) / 2; ++i) in_a[order[i]] = true;
  return in_a;
}

EvalScore TwofoldCv(const Model& model, std::span<const GameTrajectory> games,
                    const FitConfig& cfg, std::uint64_t seed,
                    std::optional<std::uint64_t> fit_seed) {
  if (games.size() < 2) {
    throw Error("two-fold cross-validation needs at least 2 games, got " +
                std::to_string(games.size()));
  }
  const std::vector<bool> in_a = TwofoldAssignment(static_cast<int>(games.size()), seed);
  std::array<std::vector<GameTrajectory>, 2> folds;
  for (std::size_t i = 0; i < games.size(); ++i) folds[in_a[i] ? 0 : 1].push_back(games[i]);

  const ScoreOptions opts{cfg.mask_padding};
  EvalScore score;
  for (int k = 0; k < 2; ++k) {
    FitConfig fc = cfg;
    fc.seed = DeriveSeed(fit_seed.value_or(seed), "fold", k);
    const FitResult fit = Fit(model, folds[k], fc);
    const NllValue held = Nll(model, fit.theta, folds[1 - k], opts);
    score.fold_theta[k] = fit.theta;
    score.fold_scores[1 - k] = NormalizedLikelihood(held.nll, held.predictions);
    score.nll += held.nll;
    score.predictions += held.predictions;
  }
  score.normalized_likelihood = NormalizedLikelihood(score.nll, score.predictions);
  return score;
}

nlohmann::json EvalScoreToJson(const EvalScore& s) {
  return {{"normalized_likelihood", s.normalized_likelihood},
          {"nll", s.nll},
          {"predictions", s.predictions},
          {"fold_scores", s.fold_scores},
          {"fold_theta", s.fold_theta}};
}

// ---------------------------------------------------------------------------

double GameWinRate(const GameTrajectory& game) {
  const int n = RecordedRounds(game);
  if (n == 0) return 0.0;
  int wins = 0;
  for (int t = 0; t < n; ++t) wins += game.rounds[t].reward == 3;
  return static_cast<double>(wins) / n;
}

WinRateStats ComputeWinRates(std::span<const GameTrajectory> games,
                             const WinRateOptions& options) {
  if (games.empty()) throw Error("win rates of an empty dataset");
  if (options.window < 1) throw Error("window must be >= 1");
  WinRateStats stats;
  stats.games = static_cast<int>(games.size());
  std::vector<double> all;
  std::map<int, std::vector<double>> by_bot;
  int longest = 0;
  for (const GameTrajectory& g : games) {
    const double w = GameWinRate(g);
    all.push_back(w);
    by_bot[g.bot_id].push_back(w);
    longest = std::max(longest, RecordedRounds(g));
  }
  stats.aggregate = Summarize(all, options, 0);
  for (const auto& [bot, xs] : by_bot) {
    stats.per_bot[bot] = Summarize(xs, options, 1000 + static_cast<std::uint64_t>(bot));
  }
  for (int start = 0; start < longest; start += options.window) {
    const int end = std::min(start + options.window, longest);
    std::vector<double> xs;
    for (const GameTrajectory& g : games) {
      const int stop = std::min(end, RecordedRounds(g));
      if (stop <= start) continue;
      int wins = 0;
      for (int t = start; t < stop; ++t) wins += g.rounds[t].reward == 3;
      xs.push_back(static_cast<double>(wins) / (stop - start));
    }
    WindowPoint p;
    p.round_start = start;
    p.round_end = end;
    p.games = static_cast<int>(xs.size());
    p.ci = Summarize(xs, options, 100000 + static_cast<std::uint64_t>(start));
    stats.over_time.push_back(p);
  }
  return stats;
}

nlohmann::json WinRateStatsToJson(const WinRateStats& s) {
  nlohmann::json per_bot = nlohmann::json::object();
  for (const auto& [bot, ci] : s.per_bot) per_bot[std::to_string(bot)] = CiJson(ci);
  nlohmann::json over = nlohmann::json::array();
  for (const WindowPoint& p : s.over_time) {
    over.push_back({{"round_start", p.round_start},
                    {"round_end", p.round_end},
                    {"mean", p.ci.mean},
                    {"half_width", p.ci.half_width},
                    {"games", p.games}});
  }
  return {{"games", s.games},
          {"aggregate", CiJson(s.aggregate)},
          {"per_bot", per_bot},
          {"over_time", over}};
}

std::string WinRateStatsToCsv(const WinRateStats& s) {
  std::ostringstream out;
  out.precision(10);
  out << "scope,key,round_start,round_end,mean,half_width,games\n";
  out << "aggregate,all,,," << s.aggregate.mean << ',' << s.aggregate.half_width << ','
      << s.games << '\n';
  for (const auto& [bot, ci] : s.per_bot) {
    out << "bot," << bot << ",,," << ci.mean << ',' << ci.half_width << ",\n";
  }
  for (const WindowPoint& p : s.over_time) {
    out << "window,," << p.round_start << ',' << p.round_end << ',' << p.ci.mean << ','
        << p.ci.half_width << ',' << p.games << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

ReplayResult ReplayEval(const Model& model, std::span<const double> theta,
                        std::span<const GameTrajectory> games, std::uint64_t seed,
                        const WinRateOptions& options) {
  ReplayResult result;
  result.synthetic.reserve(games.size());
  for (std::size_t i = 0; i < games.size(); ++i) {
    const GameTrajectory& g = games[i];
    Rng rng(DeriveSeed(seed, "replay", i));
    ModelState state(model, theta);
    Logits logits = state.InitialLogits();
    GameTrajectory syn = g;
    for (int t = 0; t < g.T(); ++t) {
      const RoundRecord& truth = g.rounds[t];
      const auto p = Softmax(logits);
      const Action sampled = static_cast<Action>(rng.Categorical(p));
      syn.rounds[t] = RoundRecord::Make(truth.t, sampled, truth.opp);
      logits = state.Observe(truth.ego, truth.opp, truth.reward);
    }
    result.synthetic.push_back(std::move(syn));
  }
  result.synthetic_stats = ComputeWinRates(result.synthetic, options);
  result.ground_truth_stats = ComputeWinRates(games, options);
  return result;
}

// ---------------------------------------------------------------------------

XgenMatrix::XgenMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                       std::vector<std::vector<EvalScore>> cells)
    : rows_(std::move(rows)), cols_(std::move(cols)), cells_(std::move(cells)) {
  if (cells_.size() != rows_.size()) throw ContractViolation("xgen: row count mismatch");
  for (const auto& r : cells_) {
    if (r.size() != cols_.size()) throw ContractViolation("xgen: column count mismatch");
  }
}

int XgenMatrix::RowArgmax(int r) const {
  int best = 0;
  for (int c = 1; c < static_cast<int>(cols_.size()); ++c) {
    if (cells_[r][c].normalized_likelihood > cells_[r][best].normalized_likelihood) best = c;
  }
  return best;
}

nlohmann::json XgenMatrix::ToJson() const {
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      row.push_back(cells_[r][c].normalized_likelihood);
      nlohmann::json cell = EvalScoreToJson(cells_[r][c]);
      cell["dataset"] = rows_[r];
      cell["program"] = cols_[c];
      cells.push_back(std::move(cell));
    }
    values.push_back(std::move(row));
  }
  nlohmann::json argmax = nlohmann::json::array();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    argmax.push_back(cols_.empty() ? "" : cols_[RowArgmax(static_cast<int>(r))]);
  }
  return {{"rows", rows_}, {"cols", cols_},     {"normalized_likelihood", values},
          {"row_best", argmax}, {"cells", cells}};
}

std::string XgenMatrix::ToCsv() const {
  std::ostringstream out;
  out.precision(10);
  out << "dataset,program,normalized_likelihood,nll,predictions\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      const EvalScore& s = cells_[r][c];
      out << rows_[r] << ',' << cols_[c] << ',' << s.normalized_likelihood << ',' << s.nll
          << ',' << s.predictions << '\n';
    }
  }
  return out.str();
}

XgenMatrix CrossGeneralization(const std::vector<NamedModel>& programs,
                               const std::vector<NamedDataset>& datasets,
                               const FitConfig& cfg, std::uint64_t seed, int jobs) {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<std::vector<GameTrajectory>> evals;
  for (const NamedDataset& d : datasets) {
    rows.push_back(d.name);
    evals.push_back(PartitionGames(d.games).eval);
  }
  for (const NamedModel& m : programs) cols.push_back(m.name);
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(cols.size());
  std::vector<std::vector<EvalScore>> cells(nr, std::vector<EvalScore>(nc));
  FitConfig inner = cfg;
  inner.jobs = 1;
  ParallelFor(nr * nc, jobs, [&](int i) {
    const int r = i / nc;
    const int c = i % nc;
    cells[r][c] = TwofoldCv(programs[c].model, evals[r], inner, DeriveSeed(seed, rows[r]));
  });
  return XgenMatrix(std::move(rows), std::move(cols), std::move(cells));
}

}  // namespace irps
