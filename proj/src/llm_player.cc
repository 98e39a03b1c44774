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

#include "irps/llm_player.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "irps/error.h"
#include "irps/http_client.h"
#include "irps/parallel.h"
#include "irps/rng.h"
#include "irps/simulate.h"

namespace irps {
namespace {

// Kept in sync with resources/llm_prompt_v1.txt.
constexpr const char* kDefaultTemplate =
    "You are playing a game of Rock, Paper, Scissors against an opponent over "
    "{{total_rounds}} rounds.\n"
    "\n"
    "Rules:\n"
    "- Rock beats Scissors, Scissors beats Paper, and Paper beats Rock.\n"
    "- Each round you and your opponent choose a move at the same time.\n"
    "- A win earns you 3 points, a tie earns 0 points, and a loss earns -1 points.\n"
    "- Your opponent follows a fixed strategy for the whole game. Try to earn as many "
    "points as possible.\n"
    "\n"
    "{{history}}\n"
    "{{tally}}\n"
    "\n"
    "This is round {{round_number}} of {{total_rounds}}. Reply with exactly one word: "
    "Rock, Paper, or Scissors.\n";

void ReplaceAll(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json DefaultRequestTemplate() {
  return {{"model", ""},
          {"temperature", 0.5},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", ""}}})}};
}

nlohmann::ordered_json RawRoundJson(const RawRound& r) {
  nlohmann::ordered_json j;
  j["t"] = r.t;
  j["ego"] = r.ego ? nlohmann::json(ToInt(*r.ego)) : nlohmann::json(nullptr);
  j["opp"] = r.opp ? nlohmann::json(ToInt(*r.opp)) : nlohmann::json(nullptr);
  j["reward"] = r.reward ? nlohmann::json(*r.reward) : nlohmann::json(nullptr);
  return j;
}

std::string RawGameLine(const RawGame& g) {
  nlohmann::ordered_json j;
  j["game_id"] = g.game_id;
  j["agent_label"] = g.agent_label;
  j["bot_id"] = g.bot_id;
  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  for (const RawRound& r : g.rounds) rounds.push_back(RawRoundJson(r));
  j["rounds"] = std::move(rounds);
  return j.dump();
}

void WriteCheckpoint(const std::filesystem::path& path, const RawGame& g) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + tmp.string());
    out << RawGameLine(g) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

struct GameJob {
  const BotSpec* bot;
  int game_index;
  std::string game_id;
};

struct GameOutcome {
  RawGame game;
  long calls = 0;
  long retries = 0;
  int missing = 0;
  int resumed = 0;
};

GameOutcome PlayGame(const LlmTransport& transport, const LlmClientConfig& client,
                     const std::string& prompt_template, const GameJob& job,
                     const CollectConfig& cfg, const std::string& label,
                     const std::filesystem::path& out_path) {
  const BotSpec& bot = *job.bot;
  const std::uint64_t game_seed = DeriveSeed(
      cfg.seed, "game", static_cast<std::uint64_t>(bot.bot_id) * 1000000 + job.game_index);
  Rng bot_rng(DeriveSeed(game_seed, "bot"));
  BotState state = InitialBotState(bot);

  GameOutcome out;
  out.game.game_id = job.game_id;
  out.game.agent_label = label;
  out.game.bot_id = bot.bot_id;
  std::vector<RoundRecord> shown;  // history as presented in prompts

  auto advance = [&](const RawRound& r) {
    // A missing reply is shown and fed to the bot as Rock.
    const Action ego = r.ego.value_or(Action::kRock);
    shown.push_back(RoundRecord::Make(r.t, ego, *r.opp));
    ObserveInPlace(bot, state, *r.opp, ego);
    out.game.rounds.push_back(r);
  };

  const std::filesystem::path ckpt = CheckpointPath(out_path, job.game_id);
  if (std::filesystem::exists(ckpt)) {
    const std::vector<RawGame> saved = ParseRawGames(ReadText(ckpt));
    if (saved.size() != 1 || saved[0].game_id != job.game_id) {
      throw Error("checkpoint " + ckpt.string() + " does not belong to game " + job.game_id);
    }
    for (const RawRound& r : saved[0].rounds) {
      const Action bot_move = BotAct(bot, state, bot_rng);
      if (!r.opp || *r.opp != bot_move || r.t != static_cast<int>(out.game.rounds.size())) {
        throw Error("checkpoint " + ckpt.string() + " disagrees with the seeded bot at round " +
                    std::to_string(r.t));
      }
      advance(r);
      ++out.resumed;
    }
  }

  for (int t = static_cast<int>(out.game.rounds.size()); t < cfg.rounds; ++t) {
    // Drawn before the agent moves; the bot never sees this round's reply.
    const Action bot_move = BotAct(bot, state, bot_rng);
    const std::string prompt = BuildPrompt(shown, cfg.rounds, t, prompt_template);
    std::optional<Action> move;
    bool any_reply = false;
    std::string last_error;
    for (int attempt = 0; attempt <= client.max_retries && !move; ++attempt) {
      if (attempt > 0) ++out.retries;
      ++out.calls;
      try {
        const std::string reply = transport(prompt);
        any_reply = true;
        move = ParseMove(reply);
        if (!move) last_error = "no move in reply";
      } catch (const Error& e) {
        last_error = e.what();
      }
    }
    if (!move && !any_reply) {
      throw Error("endpoint failed " + std::to_string(client.max_retries + 1) +
                  " times at round " + std::to_string(t) + " of game " + job.game_id + ": " +
                  last_error + " (checkpoint kept at " + ckpt.string() + ")");
    }
    RawRound r;
    r.t = t;
    r.opp = bot_move;
    if (move) {
      r.ego = *move;
      r.reward = EgoReward(*move, bot_move);
    } else {
      ++out.missing;
    }
    advance(r);
    WriteCheckpoint(ckpt, out.game);
  }
  return out;
}

}  // namespace

LlmClientConfig::LlmClientConfig() : request_template(DefaultRequestTemplate()) {}

nlohmann::json LlmClientConfigToJson(const LlmClientConfig& c) {
  return {{"base_url", c.base_url},
          {"model", c.model},
          {"api_key_env", c.api_key_env},
          {"temperature", c.temperature},
          {"max_retries", c.max_retries},
          {"timeout_seconds", c.timeout_seconds},
          {"request_template", c.request_template},
          {"prompt_pointer", c.prompt_pointer},
          {"model_pointer", c.model_pointer},
          {"temperature_pointer", c.temperature_pointer},
          {"response_pointer", c.response_pointer},
          {"options", c.options},
          {"prompt_template_path", c.prompt_template_path},
          {"concurrency", c.concurrency},
          {"agent_label", c.agent_label}};
}

LlmClientConfig LlmClientConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("LLM client config must be a JSON object");
  for (const char* forbidden : {"api_key", "token", "password", "secret"}) {
    if (j.contains(forbidden)) {
      throw SchemaError(std::string("LLM client config must not contain '") + forbidden +
                        "'; name an environment variable in api_key_env instead");
    }
  }
  LlmClientConfig c;
  try {
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    if (j.contains("request_template")) c.request_template = j.at("request_template");
    c.prompt_pointer = j.value("prompt_pointer", c.prompt_pointer);
    c.model_pointer = j.value("model_pointer", c.model_pointer);
    c.temperature_pointer = j.value("temperature_pointer", c.temperature_pointer);
    c.response_pointer = j.value("response_pointer", c.response_pointer);
    if (j.contains("options")) c.options = j.at("options");
    c.prompt_template_path = j.value("prompt_template_path", c.prompt_template_path);
    c.concurrency = j.value("concurrency", c.concurrency);
    c.agent_label = j.value("agent_label", c.agent_label);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("LLM client config: ") + e.what());
  }
  if (c.temperature < 0 || c.max_retries < 0 || c.timeout_seconds <= 0 || c.concurrency < 1) {
    throw SchemaError(
        "LLM client config: temperature >= 0, max_retries >= 0, timeout > 0, concurrency >= 1");
  }
  if (!c.options.is_object()) throw SchemaError("LLM client config: options must be an object");
  return c;
}

const std::string& DefaultPromptTemplate() {
  static const std::string* text = new std::string(kDefaultTemplate);
  return *text;
}

std::string LoadPromptTemplate(const std::string& path) {
  if (path.empty()) return DefaultPromptTemplate();
  return ReadText(path);
}

std::string BuildPrompt(std::span<const RoundRecord> history, int total_rounds,
                        int round_index, const std::string& prompt_template) {
  if (static_cast<int>(history.size()) != round_index) {
    throw ContractViolation("prompt for round " + std::to_string(round_index) + " given " +
                            std::to_string(history.size()) + " history rounds");
  }
  std::ostringstream lines;
  int wins = 0;
  int ties = 0;
  int losses = 0;
  int score = 0;
  if (history.empty()) {
    lines << "No rounds have been played yet.";
  } else {
    lines << "Results so far:";
    for (std::size_t i = 0; i < history.size(); ++i) {
      const RoundRecord& r = history[i];
      const Outcome o = OutcomeOf(r.ego, r.opp);
      const char* verb = o == Outcome::kWin ? "won" : o == Outcome::kTie ? "tied" : "lost";
      lines << "\nRound " << i + 1 << ": you played " << ActionName(r.ego)
            << ", your opponent played " << ActionName(r.opp) << ". You " << verb << " ("
            << r.reward << ").";
      wins += o == Outcome::kWin;
      ties += o == Outcome::kTie;
      losses += o == Outcome::kLoss;
      score += r.reward;
    }
  }
  std::ostringstream tally;
  tally << "Your score is " << score << " points after " << history.size() << " of "
        << total_rounds << " rounds (" << wins << " wins, " << ties << " ties, " << losses
        << " losses).";
  std::string out = prompt_template;
  ReplaceAll(out, "{{history}}", lines.str());
  ReplaceAll(out, "{{tally}}", tally.str());
  ReplaceAll(out, "{{round_number}}", std::to_string(round_index + 1));
  ReplaceAll(out, "{{total_rounds}}", std::to_string(total_rounds));
  return out;
}

std::optional<Action> ParseMove(std::string_view response) {
  std::string lower(response);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::optional<Action> best;
  std::size_t best_pos = std::string::npos;
  for (Action a : kAllActions) {
    std::string name(ActionName(a));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const std::size_t pos = lower.find(name);
    if (pos < best_pos) {
      best_pos = pos;
      best = a;
    }
  }
  return best;
}

LlmTransport HttpLlmTransport(const LlmClientConfig& cfg) {
  if (cfg.base_url.empty()) throw Error("LLM client config has no base_url");
  // Fail early when the credential variable is named but missing.
  const HttpHeaders headers = BearerFromEnv(cfg.api_key_env);
  return [cfg, headers](const std::string& prompt) {
    nlohmann::json body = cfg.request_template;
    try {
      body[nlohmann::json::json_pointer(cfg.prompt_pointer)] = prompt;
      if (!cfg.model_pointer.empty()) {
        body[nlohmann::json::json_pointer(cfg.model_pointer)] = cfg.model;
      }
      if (!cfg.temperature_pointer.empty()) {
        body[nlohmann::json::json_pointer(cfg.temperature_pointer)] = cfg.temperature;
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("cannot build request body: ") + e.what());
    }
    body.merge_patch(cfg.options);
    const HttpResponse res = HttpPost(cfg.base_url, body.dump(), headers, cfg.timeout_seconds);
    if (res.status != 200) throw Error("endpoint returned HTTP " + std::to_string(res.status));
    try {
      const nlohmann::json reply = nlohmann::json::parse(res.body);
      const auto& text = reply.at(nlohmann::json::json_pointer(cfg.response_pointer));
      if (!text.is_string()) throw Error("response field is not a string");
      return text.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      // A malformed body counts as an unusable reply, not a transport error.
      return std::string("unparseable response: ") + e.what();
    }
  };
}

nlohmann::json CollectStats::ToJson() const {
  return {{"games_completed", games_completed}, {"games_skipped", games_skipped},
          {"rounds_resumed", rounds_resumed},   {"calls", calls},
          {"retries", retries},                 {"missing_rounds", missing_rounds}};
}

std::filesystem::path CheckpointPath(const std::filesystem::path& out_path,
                                     const std::string& game_id) {
  std::string safe = game_id;
  for (char& c : safe) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return out_path.string() + "." + safe + ".partial";
}

CollectStats CollectLlmGames(const LlmTransport& transport, const LlmClientConfig& client,
                             const std::vector<BotSpec>& bots, const CollectConfig& cfg,
                             const std::filesystem::path& out_path) {
  if (cfg.rounds < 1 || cfg.games_per_bot < 0) throw Error("rounds must be >= 1");
  const std::string label =
      client.agent_label.empty() ? "llm:" + client.model : client.agent_label;
  const std::string prompt_template = LoadPromptTemplate(client.prompt_template_path);
  CollectStats stats;

  std::set<std::string> done;
  if (std::filesystem::exists(out_path)) {
    for (const RawGame& g : ParseRawGames(ReadText(out_path))) done.insert(g.game_id);
  } else {
    if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
    DatasetHeader header;
    header.agent_label = label;
    header.seed = cfg.seed;
    Dataset empty{header, {}};
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path.string());
    out << SerializeDataset(empty);
  }

  std::vector<GameJob> jobs;
  for (const BotSpec& bot : bots) {
    for (int g = 0; g < cfg.games_per_bot; ++g) {
      GameJob job{&bot, g, SimulatedGameId(label, bot.bot_id, g)};
      if (done.count(job.game_id)) {
        ++stats.games_skipped;
        continue;
      }
      jobs.push_back(std::move(job));
    }
  }

  const int batch = std::max(1, client.concurrency);
  for (std::size_t start = 0; start < jobs.size(); start += batch) {
    const int n = static_cast<int>(std::min<std::size_t>(batch, jobs.size() - start));
    std::vector<GameOutcome> results(n);
    ParallelFor(n, n, [&](int i) {
      results[i] = PlayGame(transport, client, prompt_template, jobs[start + i], cfg, label,
                            out_path);
    });
    std::ofstream out(out_path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot append to " + out_path.string());
    for (int i = 0; i < n; ++i) {
      out << RawGameLine(results[i].game) << '\n';
      out.flush();
      std::filesystem::remove(CheckpointPath(out_path, jobs[start + i].game_id));
      ++stats.games_completed;
      stats.calls += results[i].calls;
      stats.retries += results[i].retries;
      stats.missing_rounds += results[i].missing;
      stats.rounds_resumed += results[i].resumed;
    }
  }
  return stats;
}

}  // namespace irps
