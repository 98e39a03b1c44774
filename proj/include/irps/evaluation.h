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

// Scoring behavioral models against data: partitions, cross-validated
// normalized likelihood, win-rate summaries and the cross-generalization
// matrix.

#ifndef IRPS_EVALUATION_H_
#define IRPS_EVALUATION_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irps/fitting.h"
#include "irps/game.h"
#include "irps/models.h"
#include "irps/stats.h"
#include "json.hpp"

namespace irps {

struct Partition {
  std::vector<GameTrajectory> train;  // odd positions
  std::vector<GameTrajectory> eval;   // even positions
};

// Splits by position in the dataset: even indices evaluate, odd indices
// train.
Partition PartitionGames(std::span<const GameTrajectory> games);

// exp(-nll / M). Throws Error when M <= 0.
double NormalizedLikelihood(double nll, long predictions);

struct EvalScore {
  double normalized_likelihood = 0.0;
  double nll = 0.0;
  long predictions = 0;
  // Held-out normalized likelihood of fold A (scored with the fit on B) and
  // of fold B (scored with the fit on A).
  std::array<double, 2> fold_scores{};
  std::array<std::vector<double>, 2> fold_theta;  // fit on A, fit on B
};

// Randomly halves `games` (seeded), fits on each half and scores the other.
// The combined score pools every held-out prediction. The fold fits draw
// their restarts from `fit_seed` when given, else from `seed`. Throws Error
// for fewer than two games.
EvalScore TwofoldCv(const Model& model, std::span<const GameTrajectory> games,
                    const FitConfig& cfg, std::uint64_t seed,
                    std::optional<std::uint64_t> fit_seed = std::nullopt);

// Fold membership used by TwofoldCv: true for fold A.
std::vector<bool> TwofoldAssignment(int n_games, std::uint64_t seed);

nlohmann::json EvalScoreToJson(const EvalScore& score);

// ---------------------------------------------------------------------------
// Win rates.

struct WinRateOptions {
  int window = 30;
  bool bootstrap = false;
  int resamples = 1000;
  std::uint64_t seed = 0;
};

struct WindowPoint {
  int round_start = 0;  // inclusive
  int round_end = 0;    // exclusive
  MeanCi ci;
  int games = 0;
};

struct WinRateStats {
  std::map<int, MeanCi> per_bot;
  std::vector<WindowPoint> over_time;
  MeanCi aggregate;
  int games = 0;
};

// Per-game win fraction over the recorded (unpadded) rounds; intervals are
// taken over per-game means. Throws Error for an empty dataset.
WinRateStats ComputeWinRates(std::span<const GameTrajectory> games,
                             const WinRateOptions& options = {});

// Fraction of recorded rounds won by the ego player.
double GameWinRate(const GameTrajectory& game);

nlohmann::json WinRateStatsToJson(const WinRateStats& stats);
// Rows: scope,key,round_start,round_end,mean,half_width,games.
std::string WinRateStatsToCsv(const WinRateStats& stats);

// ---------------------------------------------------------------------------
// Offline replay.

struct ReplayResult {
  // Copies of the input games whose ego moves are the model's samples.
  std::vector<GameTrajectory> synthetic;
  WinRateStats synthetic_stats;
  WinRateStats ground_truth_stats;
};

// Feeds each historical game through the model one round at a time, samples
// the model's move for every round and scores it against the recorded
// opponent move. The model always conditions on the true history.
ReplayResult ReplayEval(const Model& model, std::span<const double> theta,
                        std::span<const GameTrajectory> games, std::uint64_t seed,
                        const WinRateOptions& options = {});

// ---------------------------------------------------------------------------
// Cross-generalization.

struct NamedModel {
  std::string name;
  Model model;
};

struct NamedDataset {
  std::string name;
  std::vector<GameTrajectory> games;
};

// Rows are datasets, columns are programs. Scores are only comparable
// within a row, so the type offers per-row access and no global reductions.
class XgenMatrix {
 public:
  XgenMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
             std::vector<std::vector<EvalScore>> cells);

  const std::vector<std::string>& rows() const { return rows_; }
  const std::vector<std::string>& cols() const { return cols_; }
  const EvalScore& cell(int row, int col) const { return cells_[row][col]; }
  const std::vector<EvalScore>& row(int r) const { return cells_[r]; }
  // Column with the highest normalized likelihood in row r (lowest index on
  // ties).
  int RowArgmax(int r) const;

  nlohmann::json ToJson() const;
  // Long format: dataset,program,normalized_likelihood,nll,predictions.
  std::string ToCsv() const;

 private:
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<std::vector<EvalScore>> cells_;
};

// Each cell runs TwofoldCv of the program on the dataset's evaluation split.
// Cells run on up to `jobs` workers; the fit inside a cell is sequential.
XgenMatrix CrossGeneralization(const std::vector<NamedModel>& programs,
                               const std::vector<NamedDataset>& datasets,
                               const FitConfig& cfg, std::uint64_t seed, int jobs = 1);

}  // namespace irps

#endif  // IRPS_EVALUATION_H_
