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

// Gameplay collection from a chat-completion endpoint: one independent
// request per round, each carrying the full game so far.

#ifndef IRPS_LLM_PLAYER_H_
#define IRPS_LLM_PLAYER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irps/bots.h"
#include "irps/dataset.h"
#include "irps/game.h"
#include "json.hpp"

namespace irps {

struct LlmClientConfig {
  std::string base_url;  // full endpoint URL
  std::string model;
  // Environment variable holding the bearer token. The token itself is never
  // stored in configs, manifests or outputs.
  std::string api_key_env;
  double temperature = 0.5;
  int max_retries = 3;
  double timeout_seconds = 60.0;
  // Request body skeleton; the prompt, model and temperature are written at
  // the JSON pointers below, then `options` is merged in.
  nlohmann::json request_template;
  std::string prompt_pointer = "/messages/0/content";
  std::string model_pointer = "/model";
  std::string temperature_pointer = "/temperature";
  std::string response_pointer = "/choices/0/message/content";
  nlohmann::json options = nlohmann::json::object();
  // Optional prompt template file; the built-in template is used otherwise.
  std::string prompt_template_path;
  // Games played at once.
  int concurrency = 1;
  // Dataset agent label; defaults to "llm:<model>".
  std::string agent_label;

  LlmClientConfig();
};

nlohmann::json LlmClientConfigToJson(const LlmClientConfig& cfg);
LlmClientConfig LlmClientConfigFromJson(const nlohmann::json& j);

// Version tag of the built-in template.
inline constexpr const char* kPromptTemplateVersion = "v1";
const std::string& DefaultPromptTemplate();
std::string LoadPromptTemplate(const std::string& path);

// Fills {{total_rounds}}, {{round_number}}, {{history}} and {{tally}}.
// Requires history.size() == round_index (ContractViolation otherwise).
std::string BuildPrompt(std::span<const RoundRecord> history, int total_rounds, int round_index,
                        const std::string& prompt_template = DefaultPromptTemplate());

// First case-insensitive occurrence of rock, paper or scissors.
std::optional<Action> ParseMove(std::string_view response);

// Sends one prompt, returns the reply text. Throws Error on transport
// failure.
using LlmTransport = std::function<std::string(const std::string& prompt)>;
LlmTransport HttpLlmTransport(const LlmClientConfig& cfg);

struct CollectConfig {
  int games_per_bot = 20;
  int rounds = kDefaultRounds;
  std::uint64_t seed = 0;
};

struct CollectStats {
  int games_completed = 0;
  int games_skipped = 0;  // already present in the output file
  int rounds_resumed = 0;
  long calls = 0;
  long retries = 0;
  int missing_rounds = 0;
  nlohmann::json ToJson() const;
};

// Plays games_per_bot games against each bot. Finished games are appended to
// `out_path` (a raw game file: header line, then one game per line, with a
// null ego move for rounds that never produced a parseable reply). The game
// in progress is checkpointed beside it after every round, so a rerun with
// the same arguments resumes where the last one stopped. Transport failures
// that outlast the retries abort the run with the checkpoint in place.
CollectStats CollectLlmGames(const LlmTransport& transport, const LlmClientConfig& client,
                             const std::vector<BotSpec>& bots, const CollectConfig& cfg,
                             const std::filesystem::path& out_path);

std::filesystem::path CheckpointPath(const std::filesystem::path& out_path,
                                     const std::string& game_id);

}  // namespace irps

#endif  // IRPS_LLM_PLAYER_H_
