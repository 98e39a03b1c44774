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

#include "irps/dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "irps/error.h"

namespace irps {
namespace {

using ojson = nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<std::pair<int, std::string>> SplitLines(std::string_view text) {
  std::vector<std::pair<int, std::string>> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                    : nl - pos));
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) {
      lines.emplace_back(number, std::move(line));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

nlohmann::json ParseLine(const std::string& line, int number) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what(), number);
  }
}

int RequireInt(const nlohmann::json& j, const char* key, int line) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'", line);
  const auto& v = j.at(key);
  if (!v.is_number_integer()) {
    throw SchemaError(std::string("field '") + key + "' must be an integer", line);
  }
  return v.get<int>();
}

std::string RequireString(const nlohmann::json& j, const char* key, int line) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw SchemaError(std::string("field '") + key + "' must be a string", line);
  }
  return j.at(key).get<std::string>();
}

Action RequireAction(const nlohmann::json& j, const char* key, int line) {
  const int v = RequireInt(j, key, line);
  if (v < 0 || v > 2) {
    throw SchemaError(std::string("field '") + key + "' must be 0, 1 or 2", line);
  }
  return static_cast<Action>(v);
}

std::optional<Action> OptionalAction(const nlohmann::json& j, const char* key, int line) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return RequireAction(j, key, line);
}

DatasetHeader HeaderFromJson(const nlohmann::json& j, int line) {
  if (!j.is_object() || j.contains("rounds")) {
    throw SchemaError("first line must be the dataset header", line);
  }
  DatasetHeader h;
  h.schema_version = RequireInt(j, "schema_version", line);
  if (h.schema_version != kSchemaVersion) {
    throw SchemaError("unknown schema_version " + std::to_string(h.schema_version), line);
  }
  h.agent_label = RequireString(j, "agent_label", line);
  if (j.contains("created")) h.created = RequireString(j, "created", line);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw SchemaError("field 'seed' must be an integer", line);
    }
    h.seed = j.at("seed").get<std::uint64_t>();
  }
  return h;
}

ojson HeaderToJson(const DatasetHeader& h) {
  ojson j;
  j["schema_version"] = h.schema_version;
  j["agent_label"] = h.agent_label;
  j["created"] = h.created;
  j["seed"] = h.seed;
  return j;
}

RawGame RawGameFromJson(const nlohmann::json& j, int line) {
  if (!j.is_object()) throw SchemaError("game record must be an object", line);
  RawGame g;
  g.game_id = RequireString(j, "game_id", line);
  if (j.contains("agent_label")) g.agent_label = RequireString(j, "agent_label", line);
  g.bot_id = RequireInt(j, "bot_id", line);
  if (!j.contains("rounds") || !j.at("rounds").is_array()) {
    throw SchemaError("field 'rounds' must be an array", line);
  }
  for (const auto& r : j.at("rounds")) {
    if (!r.is_object()) throw SchemaError("round must be an object", line);
    RawRound rr;
    rr.t = RequireInt(r, "t", line);
    rr.ego = OptionalAction(r, "ego", line);
    rr.opp = OptionalAction(r, "opp", line);
    if (r.contains("reward") && !r.at("reward").is_null()) {
      rr.reward = RequireInt(r, "reward", line);
    }
    g.rounds.push_back(rr);
  }
  if (j.contains("padded_from")) g.padded_from = RequireInt(j, "padded_from", line);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------

ojson GameToJson(const GameTrajectory& game) {
  ojson j;
  j["game_id"] = game.game_id;
  j["agent_label"] = game.agent_label;
  j["bot_id"] = game.bot_id;
  ojson rounds = ojson::array();
  for (const RoundRecord& r : game.rounds) {
    ojson o;
    o["t"] = r.t;
    o["ego"] = ToInt(r.ego);
    o["opp"] = ToInt(r.opp);
    o["reward"] = r.reward;
    rounds.push_back(std::move(o));
  }
  j["rounds"] = std::move(rounds);
  if (game.padded_from) j["padded_from"] = *game.padded_from;
  return j;
}

GameTrajectory GameFromJson(const nlohmann::json& j, int line) {
  if (!j.is_object()) throw SchemaError("game record must be an object", line);
  GameTrajectory g;
  g.game_id = RequireString(j, "game_id", line);
  g.agent_label = j.contains("agent_label") ? RequireString(j, "agent_label", line) : "";
  g.bot_id = RequireInt(j, "bot_id", line);
  if (!j.contains("rounds") || !j.at("rounds").is_array()) {
    throw SchemaError("field 'rounds' must be an array", line);
  }
  for (const auto& r : j.at("rounds")) {
    if (!r.is_object()) throw SchemaError("round must be an object", line);
    RoundRecord rec;
    rec.t = RequireInt(r, "t", line);
    rec.ego = RequireAction(r, "ego", line);
    rec.opp = RequireAction(r, "opp", line);
    rec.reward = RequireInt(r, "reward", line);
    g.rounds.push_back(rec);
  }
  if (j.contains("padded_from")) g.padded_from = RequireInt(j, "padded_from", line);
  try {
    ValidateTrajectory(g);
  } catch (const Error& e) {
    throw SchemaError(e.what(), line);
  }
  return g;
}

std::string SerializeDataset(const Dataset& dataset) {
  std::string out = HeaderToJson(dataset.header).dump();
  out += '\n';
  for (const GameTrajectory& g : dataset.games) {
    out += GameToJson(g).dump();
    out += '\n';
  }
  return out;
}

Dataset ParseDataset(std::string_view text) {
  const auto lines = SplitLines(text);
  if (lines.empty()) throw SchemaError("empty dataset file");
  Dataset d;
  d.header = HeaderFromJson(ParseLine(lines[0].second, lines[0].first), lines[0].first);
  std::set<std::string> ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int n = lines[i].first;
    GameTrajectory g = GameFromJson(ParseLine(lines[i].second, n), n);
    if (!ids.insert(g.game_id).second) {
      throw SchemaError("duplicate game_id '" + g.game_id + "'", n);
    }
    d.games.push_back(std::move(g));
  }
  return d;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  WriteFile(path, SerializeDataset(dataset));
}

Dataset LoadDataset(const std::filesystem::path& path) {
  try {
    return ParseDataset(ReadFile(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

std::optional<Action> DeduceEgo(Action opp, int reward) {
  std::optional<Action> found;
  int matches = 0;
  for (Action a : kAllActions) {
    if (EgoReward(a, opp) == reward) {
      found = a;
      ++matches;
    }
  }
  if (matches != 1) return std::nullopt;
  return found;
}

namespace {

// Opponent move giving the ego `reward` when the ego played `ego`.
std::optional<Action> DeduceOpp(Action ego, int reward) {
  std::optional<Action> found;
  int matches = 0;
  for (Action o : kAllActions) {
    if (EgoReward(ego, o) == reward) {
      found = o;
      ++matches;
    }
  }
  if (matches != 1) return std::nullopt;
  return found;
}

}  // namespace

RawGame ToRawGame(const GameTrajectory& game) {
  RawGame g;
  g.game_id = game.game_id;
  g.agent_label = game.agent_label;
  g.bot_id = game.bot_id;
  g.padded_from = game.padded_from;
  for (const RoundRecord& r : game.rounds) g.rounds.push_back({r.t, r.ego, r.opp, r.reward});
  return g;
}

nlohmann::json PreprocessReport::ToJson() const {
  nlohmann::json acts = nlohmann::json::array();
  for (const PreprocessAction& a : actions) {
    nlohmann::json o = {{"game_id", a.game_id}, {"action", a.action}};
    if (a.round >= 0) o["round"] = a.round;
    if (!a.detail.empty()) o["detail"] = a.detail;
    acts.push_back(std::move(o));
  }
  std::map<std::string, int> counts;
  for (const PreprocessAction& a : actions) counts[a.action]++;
  return {{"games_in", games_in}, {"games_out", games_out}, {"counts", counts},
          {"actions", acts}};
}

PreprocessResult Preprocess(const std::vector<RawGame>& games, const PreprocessConfig& cfg,
                            const DatasetHeader& header) {
  PreprocessResult res;
  res.dataset.header = header;
  res.report.games_in = static_cast<int>(games.size());
  const std::set<std::string> excluded(cfg.excluded_ids.begin(), cfg.excluded_ids.end());
  auto note = [&](const std::string& id, const std::string& action, int round,
                  std::string detail) {
    res.report.actions.push_back({id, action, round, std::move(detail)});
  };
  for (const RawGame& raw : games) {
    if (excluded.count(raw.game_id)) {
      note(raw.game_id, "excluded_id", -1, "");
      continue;
    }
    int length = 0;
    for (const RawRound& r : raw.rounds) length = std::max(length, r.t + 1);
    // Later duplicates of a round index win.
    std::vector<std::optional<RawRound>> slots(length);
    for (const RawRound& r : raw.rounds) {
      if (r.t >= 0) slots[r.t] = r;
    }
    if (length < cfg.min_rounds) {
      note(raw.game_id, "too_few_rounds", -1,
           std::to_string(length) + " < " + std::to_string(cfg.min_rounds));
      continue;
    }
    int missing = 0;
    for (const auto& s : slots) missing += !s || !s->ego;
    if (missing > cfg.max_missing) {
      note(raw.game_id, "too_many_missing", -1,
           std::to_string(missing) + " > " + std::to_string(cfg.max_missing));
      continue;
    }
    GameTrajectory g;
    g.game_id = raw.game_id;
    g.agent_label = raw.agent_label;
    g.bot_id = raw.bot_id;
    g.padded_from = raw.padded_from;
    const int keep = std::min(length, cfg.pad_to);
    for (int t = 0; t < keep; ++t) {
      RawRound r = slots[t].value_or(RawRound{t, std::nullopt, std::nullopt, std::nullopt});
      if (!r.ego && r.opp && r.reward) {
        if (auto e = DeduceEgo(*r.opp, *r.reward)) {
          r.ego = e;
          note(g.game_id, "deduced_ego", t, std::string(ActionName(*e)));
        }
      }
      if (r.ego && !r.opp && r.reward) {
        if (auto o = DeduceOpp(*r.ego, *r.reward)) {
          r.opp = o;
          note(g.game_id, "deduced_opp", t, std::string(ActionName(*o)));
        }
      }
      if (!r.ego || !r.opp) {
        note(g.game_id, "imputed_rock_rock", t, "");
        g.rounds.push_back(RoundRecord::Make(t, Action::kRock, Action::kRock));
        continue;
      }
      RoundRecord rec = RoundRecord::Make(t, *r.ego, *r.opp);
      if (r.reward && *r.reward != rec.reward) {
        note(g.game_id, "reward_recomputed", t,
             std::to_string(*r.reward) + " -> " + std::to_string(rec.reward));
      }
      g.rounds.push_back(rec);
    }
    if (length > cfg.pad_to) {
      note(g.game_id, "truncated", -1,
           std::to_string(length) + " -> " + std::to_string(cfg.pad_to));
      if (g.padded_from && *g.padded_from > cfg.pad_to) g.padded_from = cfg.pad_to;
    }
    if (keep < cfg.pad_to) {
      note(g.game_id, "padded", -1, std::to_string(keep) + " -> " + std::to_string(cfg.pad_to));
      if (!g.padded_from) g.padded_from = keep;
      for (int t = keep; t < cfg.pad_to; ++t) {
        g.rounds.push_back(RoundRecord::Make(t, Action::kRock, Action::kRock));
      }
    }
    res.dataset.games.push_back(std::move(g));
  }
  res.report.games_out = static_cast<int>(res.dataset.games.size());
  return res;
}

PreprocessResult Preprocess(const Dataset& dataset, const PreprocessConfig& cfg) {
  std::vector<RawGame> raw;
  raw.reserve(dataset.games.size());
  for (const GameTrajectory& g : dataset.games) raw.push_back(ToRawGame(g));
  return Preprocess(raw, cfg, dataset.header);
}

std::vector<RawGame> ParseRawGames(std::string_view text) {
  const auto lines = SplitLines(text);
  std::vector<RawGame> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const nlohmann::json j = ParseLine(lines[i].second, lines[i].first);
    // An optional header line is skipped.
    if (i == 0 && j.is_object() && j.contains("schema_version") && !j.contains("rounds")) {
      HeaderFromJson(j, lines[i].first);
      continue;
    }
    out.push_back(RawGameFromJson(j, lines[i].first));
  }
  return out;
}

std::vector<RawGame> LoadRawGames(const std::filesystem::path& path) {
  try {
    return ParseRawGames(ReadFile(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

nlohmann::json PreprocessConfigToJson(const PreprocessConfig& c) {
  return {{"min_rounds", c.min_rounds},
          {"max_missing", c.max_missing},
          {"pad_to", c.pad_to},
          {"excluded_ids", c.excluded_ids}};
}

PreprocessConfig PreprocessConfigFromJson(const nlohmann::json& j) {
  PreprocessConfig c;
  if (!j.is_object()) throw SchemaError("preprocess config must be a JSON object");
  try {
    c.min_rounds = j.value("min_rounds", c.min_rounds);
    c.max_missing = j.value("max_missing", c.max_missing);
    c.pad_to = j.value("pad_to", c.pad_to);
    c.excluded_ids = j.value("excluded_ids", c.excluded_ids);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("preprocess config: ") + e.what());
  }
  if (c.min_rounds < 1 || c.max_missing < 0 || c.pad_to < 1) {
    throw SchemaError("preprocess config: thresholds must be positive");
  }
  return c;
}

// ---------------------------------------------------------------------------

std::optional<Action> ParseMoveToken(std::string_view token) {
  std::string t;
  for (char c : token) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) {
    t = t.substr(1, t.size() - 2);
  }
  if (t.empty() || t == "nan" || t == "null" || t == "na" || t == "none") return std::nullopt;
  if (t == "rock" || t == "r" || t == "0") return Action::kRock;
  if (t == "paper" || t == "p" || t == "1") return Action::kPaper;
  if (t == "scissors" || t == "s" || t == "2") return Action::kScissors;
  throw Error("unparseable move token '" + std::string(token) + "'");
}

namespace {

std::vector<std::string> SplitRow(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"') {
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (c == delim && !quoted) {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  for (std::string& s : cells) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return cells;
}

char DetectDelimiter(const std::string& header) {
  int best = 0;
  char delim = ',';
  for (char c : {'\t', ',', ';'}) {
    const int n = static_cast<int>(std::count(header.begin(), header.end(), c));
    if (n > best) {
      best = n;
      delim = c;
    }
  }
  return delim;
}

std::optional<int> ParseOptionalInt(const std::string& cell, const std::string& what,
                                    int line) {
  std::string t;
  for (char c : cell) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t.empty() || t == "nan" || t == "null" || t == "na" || t == "none") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || v != std::floor(v)) throw std::invalid_argument(t);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw SchemaError("unparseable " + what + " '" + cell + "'", line);
  }
}

std::optional<int> OutcomeToReward(const std::string& cell, int line) {
  std::string t;
  for (char c : cell) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t.empty() || t == "nan" || t == "null" || t == "na") return std::nullopt;
  if (t == "win" || t == "w") return 3;
  if (t == "tie" || t == "draw" || t == "t" || t == "d") return 0;
  if (t == "loss" || t == "lose" || t == "l") return -1;
  throw SchemaError("unparseable outcome '" + cell + "'", line);
}

}  // namespace

std::vector<RawGame> ImportTabular(std::string_view text, const ColumnMap& columns,
                                   const std::string& agent_label,
                                   std::optional<char> delimiter) {
  const auto lines = SplitLines(text);
  if (lines.empty()) throw SchemaError("empty table");
  std::string head = lines[0].second;
  if (head.size() >= 3 && head.compare(0, 3, "\xEF\xBB\xBF") == 0) head = head.substr(3);
  const char delim = delimiter.value_or(DetectDelimiter(head));
  const std::vector<std::string> names = SplitRow(head, delim);
  auto find = [&](const std::string& name, bool required) -> int {
    if (name.empty()) {
      if (required) throw SchemaError("required column mapping is empty");
      return -1;
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<int>(i);
    }
    if (required) throw SchemaError("unmapped required column '" + name + "'", lines[0].first);
    return -1;
  };
  const int c_game = find(columns.game_id, true);
  const int c_round = find(columns.round, true);
  const int c_player = find(columns.player_move, true);
  const int c_bot = find(columns.bot_move, true);
  const int c_reward = find(columns.reward, !columns.reward.empty());
  const int c_outcome = find(columns.outcome, !columns.outcome.empty());
  const int c_bot_id = find(columns.bot_id, !columns.bot_id.empty());

  std::vector<RawGame> games;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int ln = lines[i].first;
    std::vector<std::string> cells = SplitRow(lines[i].second, delim);
    cells.resize(std::max(cells.size(), names.size()));
    const std::string& id = cells[c_game];
    if (id.empty()) throw SchemaError("row without game id", ln);
    auto it = index.find(id);
    if (it == index.end()) {
      it = index.emplace(id, games.size()).first;
      RawGame g;
      g.game_id = id;
      g.agent_label = agent_label;
      if (c_bot_id >= 0) g.bot_id = ParseOptionalInt(cells[c_bot_id], "bot id", ln).value_or(0);
      games.push_back(std::move(g));
    }
    RawRound r;
    const auto t = ParseOptionalInt(cells[c_round], "round", ln);
    if (!t) throw SchemaError("row without round index", ln);
    r.t = *t;
    try {
      r.ego = ParseMoveToken(cells[c_player]);
      r.opp = ParseMoveToken(cells[c_bot]);
    } catch (const Error& e) {
      throw SchemaError(e.what(), ln);
    }
    if (c_reward >= 0) r.reward = ParseOptionalInt(cells[c_reward], "reward", ln);
    if (!r.reward && c_outcome >= 0) r.reward = OutcomeToReward(cells[c_outcome], ln);
    games[it->second].rounds.push_back(r);
  }
  // Tables often number rounds from 1; shift so the first round is t = 0.
  for (RawGame& g : games) {
    int lo = 0;
    if (!g.rounds.empty()) {
      lo = g.rounds[0].t;
      for (const RawRound& r : g.rounds) lo = std::min(lo, r.t);
    }
    if (lo > 0) {
      for (RawRound& r : g.rounds) r.t -= lo;
    }
  }
  return games;
}

std::vector<RawGame> ImportTabularFile(const std::filesystem::path& path,
                                       const ColumnMap& columns,
                                       const std::string& agent_label,
                                       std::optional<char> delimiter) {
  return ImportTabular(ReadFile(path), columns, agent_label, delimiter);
}

}  // namespace irps
