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

#include "irps/service.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "irps/dataset.h"
#include "irps/error.h"

namespace irps {
namespace {

nlohmann::json ErrorBody(const std::string& message) { return {{"error", message}}; }

ServiceResponse Fail(int status, const std::string& message) {
  return {status, ErrorBody(message)};
}

std::optional<nlohmann::json> ParseBody(const std::string& body) {
  if (body.empty()) return nlohmann::json::object();
  nlohmann::json j = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

const std::string& GameRulesText() {
  static const std::string* text = new std::string(
      "You will play Rock, Paper, Scissors against a computer opponent for 300 rounds. "
      "Rock beats Scissors, Scissors beats Paper, and Paper beats Rock. "
      "A win earns 3 points, a tie 0 points, and a loss -1 point. "
      "The opponent follows a fixed strategy for the whole game, but you are not told "
      "which one. Both moves and the outcome are shown after every round.");
  return *text;
}

struct SessionService::Session {
  std::string session_id;
  const BotSpec* bot = nullptr;
  std::uint64_t seed = 0;
  int rounds_target = kDefaultRounds;

  std::mutex mu;
  BotState state;
  Rng bot_rng{0};
  std::vector<RoundRecord> rounds;
  int tally = 0;

  bool complete() const { return static_cast<int>(rounds.size()) >= rounds_target; }

  RoundRecord Play(Action ego) {
    const int t = static_cast<int>(rounds.size());
    // The bot's move depends only on the seed and earlier rounds.
    const Action opp = BotAct(*bot, state, bot_rng);
    ObserveInPlace(*bot, state, opp, ego);
    const RoundRecord r = RoundRecord::Make(t, ego, opp);
    rounds.push_back(r);
    tally += r.reward;
    return r;
  }
};

SessionService::SessionService(ServiceConfig config)
    : config_(std::move(config)), id_rng_(DeriveSeed(config_.seed, "session_ids")) {
  if (config_.roster.empty()) throw Error("service needs a non-empty bot roster");
  if (config_.rounds < 1) throw Error("service rounds must be >= 1");
  if (config_.persist_dir) std::filesystem::create_directories(*config_.persist_dir);
}

SessionService::~SessionService() = default;

std::string SessionService::NextSessionId() {
  std::lock_guard<std::mutex> lock(id_mu_);
  for (;;) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64,
                  static_cast<std::uint64_t>(id_rng_.engine()()));
    std::string id(buf);
    std::shared_lock<std::shared_mutex> read(map_mu_);
    if (!sessions_.count(id)) return id;
  }
}

std::shared_ptr<SessionService::Session> SessionService::Find(
    const std::string& session_id) const {
  std::shared_lock<std::shared_mutex> lock(map_mu_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionService::Persist(const Session& s) const {
  if (!config_.persist_dir) return;
  nlohmann::json actions = nlohmann::json::array();
  for (const RoundRecord& r : s.rounds) actions.push_back(ToInt(r.ego));
  const nlohmann::json j = {{"session_id", s.session_id},
                            {"bot_id", s.bot->bot_id},
                            {"seed", s.seed},
                            {"rounds", s.rounds_target},
                            {"actions", actions}};
  const std::filesystem::path path = *config_.persist_dir / (s.session_id + ".json");
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

ServiceResponse SessionService::Create(const std::string& body) {
  const std::optional<nlohmann::json> req = ParseBody(body);
  if (!req) return Fail(400, "request body must be a JSON object");

  const std::string id = NextSessionId();
  auto session = std::make_shared<Session>();
  session->session_id = id;
  session->rounds_target = config_.rounds;

  if (req->contains("seed")) {
    const auto& s = req->at("seed");
    if (!s.is_number_integer()) return Fail(400, "seed must be an integer");
    session->seed = s.get<std::uint64_t>();
  } else {
    session->seed = DeriveSeed(config_.seed, id);
  }
  if (req->contains("bot_id")) {
    const auto& b = req->at("bot_id");
    if (!b.is_number_integer()) return Fail(400, "bot_id must be an integer");
    const int bot_id = b.get<int>();
    for (const BotSpec& spec : config_.roster) {
      if (spec.bot_id == bot_id) session->bot = &spec;
    }
    if (!session->bot) return Fail(400, "unknown bot_id " + std::to_string(bot_id));
  } else {
    Rng pick(DeriveSeed(session->seed, "pick_bot"));
    session->bot = &config_.roster[pick.UniformInt(static_cast<int>(config_.roster.size()))];
  }
  session->state = InitialBotState(*session->bot);
  session->bot_rng = Rng(DeriveSeed(session->seed, "bot"));

  {
    std::unique_lock<std::shared_mutex> lock(map_mu_);
    sessions_[id] = session;
  }
  Persist(*session);
  return {201, {{"session_id", id}, {"T", config_.rounds}, {"rules", GameRulesText()}}};
}

ServiceResponse SessionService::Move(const std::string& session_id, const std::string& body) {
  std::shared_ptr<Session> s = Find(session_id);
  if (!s) return Fail(404, "unknown session " + session_id);
  const std::optional<nlohmann::json> req = ParseBody(body);
  if (!req || !req->contains("action") || !req->at("action").is_number_integer()) {
    return Fail(400, "body must be {\"action\": 0|1|2}");
  }
  const int a = req->at("action").get<int>();
  if (a < 0 || a >= kNumActions) return Fail(400, "action must be 0, 1 or 2");

  std::lock_guard<std::mutex> lock(s->mu);
  if (s->complete()) return Fail(409, "session " + session_id + " is complete");
  const RoundRecord r = s->Play(ActionFromInt(a));
  Persist(*s);
  const int played = static_cast<int>(s->rounds.size());
  return {200,
          {{"round", r.t},
           {"ego", ToInt(r.ego)},
           {"opp", ToInt(r.opp)},
           {"reward", r.reward},
           {"outcome", OutcomeName(OutcomeOf(r.ego, r.opp))},
           {"tally", s->tally},
           {"progress", static_cast<double>(played) / s->rounds_target},
           {"complete", s->complete()}}};
}

ServiceResponse SessionService::Export(const std::string& session_id, bool allow_partial) {
  std::shared_ptr<Session> s = Find(session_id);
  if (!s) return Fail(404, "unknown session " + session_id);
  std::lock_guard<std::mutex> lock(s->mu);
  if (!s->complete() && !allow_partial) {
    return Fail(409, "session " + session_id + " is still active");
  }
  GameTrajectory game;
  game.game_id = config_.agent_label + "-" + s->session_id;
  game.agent_label = config_.agent_label;
  game.bot_id = s->bot->bot_id;
  game.rounds = s->rounds;
  nlohmann::json j = GameToJson(game);
  // Partial exports must not reveal the opponent.
  if (!s->complete()) j.erase("bot_id");
  return {200, j};
}

int SessionService::LoadPersisted() {
  if (!config_.persist_dir) return 0;
  int loaded = 0;
  for (const auto& entry : std::filesystem::directory_iterator(*config_.persist_dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(entry.path().string() + ": " + e.what());
    }
    auto session = std::make_shared<Session>();
    try {
      session->session_id = j.at("session_id").get<std::string>();
      session->seed = j.at("seed").get<std::uint64_t>();
      session->rounds_target = j.at("rounds").get<int>();
      const int bot_id = j.at("bot_id").get<int>();
      session->bot = &FindBot(config_.roster, bot_id);
      session->state = InitialBotState(*session->bot);
      session->bot_rng = Rng(DeriveSeed(session->seed, "bot"));
      for (const auto& a : j.at("actions")) session->Play(ActionFromInt(a.get<int>()));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(entry.path().string() + ": " + e.what());
    }
    std::unique_lock<std::shared_mutex> lock(map_mu_);
    sessions_[session->session_id] = std::move(session);
    ++loaded;
  }
  return loaded;
}

int SessionService::num_sessions() const {
  std::shared_lock<std::shared_mutex> lock(map_mu_);
  return static_cast<int>(sessions_.size());
}

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(SessionService& s) : service(s) {}

  static void Reply(httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  }

  template <typename F>
  static void Guarded(httplib::Response& res, F&& f) {
    try {
      Reply(res, f());
    } catch (const std::exception& e) {
      Reply(res, Fail(500, e.what()));
    }
  }

  void Bind() {
    const std::string origin = service.config().cors_origin;
    server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      Guarded(res, [&] { return service.Create(req.body); });
    });
    server.Post(R"(/sessions/([^/]+)/move)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  Guarded(res, [&] { return service.Move(req.matches[1], req.body); });
                });
    server.Get(R"(/sessions/([^/]+)/export)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const std::string flag = req.get_param_value("allow_partial");
                 const bool partial = flag == "1" || flag == "true";
                 Guarded(res, [&] { return service.Export(req.matches[1], partial); });
               });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok"})", "application/json");
    });
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {
  impl_->Bind();
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace irps
