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

// Session service for live play against the bot roster.  Handlers are plain
// functions of (request body) -> (status, JSON) so they can be tested without
// a socket; HttpServer binds them to routes.

#ifndef IRPS_SERVICE_H_
#define IRPS_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "irps/bots.h"
#include "irps/game.h"
#include "irps/rng.h"
#include "json.hpp"

namespace irps {

struct ServiceConfig {
  std::vector<BotSpec> roster = DefaultRoster();
  int rounds = kDefaultRounds;
  // Seeds session ids and, for sessions created without a seed, the bot rng.
  std::uint64_t seed = 0;
  std::string agent_label = "human";
  // When set, every session is mirrored to <dir>/<session_id>.json.
  std::optional<std::filesystem::path> persist_dir;
  std::string cors_origin = "*";
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

// Instructions shown to players; also returned by POST /sessions.
const std::string& GameRulesText();

class SessionService {
 public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // POST /sessions
  ServiceResponse Create(const std::string& body);
  // POST /sessions/{id}/move
  ServiceResponse Move(const std::string& session_id, const std::string& body);
  // GET /sessions/{id}/export
  ServiceResponse Export(const std::string& session_id, bool allow_partial);

  // Replays every persisted session found in persist_dir.  Returns the
  // number loaded.
  int LoadPersisted();
  int num_sessions() const;
  const ServiceConfig& config() const { return config_; }

 private:
  struct Session;

  std::shared_ptr<Session> Find(const std::string& session_id) const;
  std::string NextSessionId();
  void Persist(const Session& session) const;

  ServiceConfig config_;
  mutable std::shared_mutex map_mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex id_mu_;
  Rng id_rng_;
};

// Binds the service to host:port on a background thread.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port.  Returns the bound port.
  int Start(const std::string& host, int port);
  void Stop();
  // Blocks the caller until Stop() is called from another thread.
  void Wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace irps

#endif  // IRPS_SERVICE_H_
