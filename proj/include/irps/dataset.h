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

// Trajectory datasets on disk, and the cleanup applied to raw game logs.
//
// File format (JSON Lines, UTF-8):
//   line 1   {"schema_version":1,"agent_label":...,"created":...,"seed":...}
//   line 2+  {"game_id":...,"agent_label":...,"bot_id":...,
//             "rounds":[{"t":0,"ego":0,"opp":2,"reward":3},...]
//             [,"padded_from":N]}
// Moves are the integers 0/1/2 (Rock/Paper/Scissors). Raw logs use the same
// layout but may carry null (or absent) ego/opp/reward fields and gaps in t.

#ifndef IRPS_DATASET_H_
#define IRPS_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irps/game.h"
#include "json.hpp"

namespace irps {

inline constexpr int kSchemaVersion = 1;

struct DatasetHeader {
  int schema_version = kSchemaVersion;
  std::string agent_label;
  std::string created;  // free-form; generators leave it empty
  std::uint64_t seed = 0;
  friend bool operator==(const DatasetHeader&, const DatasetHeader&) = default;
};

struct Dataset {
  DatasetHeader header;
  std::vector<GameTrajectory> games;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

nlohmann::ordered_json GameToJson(const GameTrajectory& game);
// `line` is used in error messages only.
GameTrajectory GameFromJson(const nlohmann::json& j, int line = 0);

std::string SerializeDataset(const Dataset& dataset);
// Throws SchemaError with the offending line number.
Dataset ParseDataset(std::string_view text);
void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset LoadDataset(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Raw games and preprocessing.

struct RawRound {
  int t = 0;
  std::optional<Action> ego;
  std::optional<Action> opp;
  std::optional<int> reward;
  friend bool operator==(const RawRound&, const RawRound&) = default;
};

struct RawGame {
  std::string game_id;
  std::string agent_label;
  int bot_id = 0;
  std::vector<RawRound> rounds;
  std::optional<int> padded_from;
};

struct PreprocessConfig {
  int min_rounds = 50;
  int max_missing = 10;
  int pad_to = kDefaultRounds;
  std::vector<std::string> excluded_ids;
};

struct PreprocessAction {
  std::string game_id;
  // excluded_id, too_few_rounds, too_many_missing, deduced_ego, deduced_opp,
  // imputed_rock_rock, reward_recomputed, truncated, padded.
  std::string action;
  int round = -1;  // -1 for game-level actions
  std::string detail;
};

struct PreprocessReport {
  int games_in = 0;
  int games_out = 0;
  std::vector<PreprocessAction> actions;
  nlohmann::json ToJson() const;
};

struct PreprocessResult {
  Dataset dataset;
  PreprocessReport report;
};

// Game length is max(t) + 1; a round is missing when its ego move is absent
// (rounds absent from the log count as missing with both moves absent).
PreprocessResult Preprocess(const std::vector<RawGame>& games, const PreprocessConfig& cfg,
                            const DatasetHeader& header);
// Convenience overload; preprocessing a clean dataset is a no-op.
PreprocessResult Preprocess(const Dataset& dataset, const PreprocessConfig& cfg);

RawGame ToRawGame(const GameTrajectory& game);
// The unique ego move earning `reward` against `opp`, if any.
std::optional<Action> DeduceEgo(Action opp, int reward);

std::vector<RawGame> ParseRawGames(std::string_view text);
std::vector<RawGame> LoadRawGames(const std::filesystem::path& path);
nlohmann::json PreprocessConfigToJson(const PreprocessConfig& cfg);
PreprocessConfig PreprocessConfigFromJson(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Delimited-text import.

struct ColumnMap {
  std::string game_id = "game_id";
  std::string round = "round";
  std::string player_move = "player_move";
  std::string bot_move = "bot_move";
  // Either a numeric reward column or an outcome column (win/tie/loss);
  // both optional.
  std::string reward;
  std::string outcome;
  std::string bot_id;  // optional
};

// Parses a move token: rock/paper/scissors, r/p/s or 0/1/2, case-insensitive.
// Empty, "nan", "null" and "na" yield nullopt; anything else throws.
std::optional<Action> ParseMoveToken(std::string_view token);

// Groups rows into raw games (ordered by first appearance). The delimiter is
// detected from the header line (tab, comma, semicolon) unless given.
std::vector<RawGame> ImportTabular(std::string_view text, const ColumnMap& columns,
                                   const std::string& agent_label,
                                   std::optional<char> delimiter = std::nullopt);
std::vector<RawGame> ImportTabularFile(const std::filesystem::path& path,
                                       const ColumnMap& columns,
                                       const std::string& agent_label,
                                       std::optional<char> delimiter = std::nullopt);

}  // namespace irps

#endif  // IRPS_DATASET_H_
