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

// Command line front end.  Every artifact-producing subcommand writes a
// <output>.manifest.json (or DIR/manifest.json) next to its outputs.

#include <algorithm>
#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irps/bots.h"
#include "irps/dataset.h"
#include "irps/discovery.h"
#include "irps/dsl/builtins.h"
#include "irps/dsl/text.h"
#include "irps/error.h"
#include "irps/evaluation.h"
#include "irps/fitting.h"
#include "irps/llm_player.h"
#include "irps/manifest.h"
#include "irps/models.h"
#include "irps/mutator.h"
#include "irps/parallel.h"
#include "irps/service.h"
#include "irps/simulate.h"

namespace fs = std::filesystem;

namespace irps {
namespace {

std::vector<std::string> g_argv;

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json ReadJson(const fs::path& path) {
  try {
    return nlohmann::json::parse(ReadText(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void WriteJson(const fs::path& path, const nlohmann::json& j) {
  WriteText(path, j.dump(2) + "\n");
}

fs::path ManifestPathFor(const fs::path& out) { return out.string() + ".manifest.json"; }

fs::path WithSuffix(const fs::path& out, const std::string& ext) {
  fs::path p = out;
  p.replace_extension(ext);
  return p;
}

std::vector<BotSpec> LoadBots(const std::string& roster_path) {
  return roster_path.empty() ? DefaultRoster() : LoadRoster(roster_path);
}

// "all", "3", "1..7" or "1,4,9".
std::vector<BotSpec> SelectBots(const std::vector<BotSpec>& roster, const std::string& sel) {
  if (sel == "all") return roster;
  std::vector<int> ids;
  try {
    const auto dots = sel.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(sel.substr(0, dots));
      const int hi = std::stoi(sel.substr(dots + 2));
      for (int i = lo; i <= hi; ++i) ids.push_back(i);
    } else {
      std::stringstream ss(sel);
      std::string item;
      while (std::getline(ss, item, ',')) ids.push_back(std::stoi(item));
    }
  } catch (const std::exception&) {
    throw Error("cannot parse --bots '" + sel + "' (use all, ID, A..B or A,B,C)");
  }
  std::vector<BotSpec> out;
  for (int id : ids) out.push_back(FindBot(roster, id));
  return out;
}

std::vector<double> ReadTheta(const std::string& path) {
  const nlohmann::json j = ReadJson(path);
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.contains("theta")) return j.at("theta").get<std::vector<double>>();
  throw SchemaError(path + ": expected a theta array or an object with \"theta\"");
}

// Parameters for a model when no fit is supplied.
std::vector<double> DefaultTheta(const Model& model, const std::string& spec) {
  if (model.param_count() == 0) return {};
  if (spec.rfind("builtin:", 0) == 0) return dsl::BuiltinReferenceTheta(spec.substr(8));
  throw Error("model '" + spec + "' has parameters; pass --theta with a fit result");
}

FitConfig MakeFitConfig(const std::string& config_path, int restarts, std::uint64_t seed,
                        int jobs) {
  FitConfig cfg = config_path.empty() ? FitConfig{} : FitConfigFromJson(ReadJson(config_path));
  if (restarts > 0) cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.jobs = jobs;
  return cfg;
}

Dataset LoadData(const std::string& path, RunManifest& manifest) {
  manifest.AddInput(path);
  return LoadDataset(path);
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string agent = "random";
  std::string model = "nash";
  std::string theta;
  std::string bots = "all";
  std::string roster;
  int games = 20;
  int rounds = kDefaultRounds;
  std::uint64_t seed = 0;
  std::string label;
  std::string out;
  int jobs = 1;
};

void RunSimulate(const SimulateOpts& o) {
  RunManifest m = BeginManifest("simulate", g_argv);
  AgentSpec agent;
  const AgentKind kind = AgentKindFromName(o.agent);
  if (kind == AgentKind::kOracle) agent = AgentSpec::Oracle();
  if (kind == AgentKind::kModel) {
    Model model = Model::FromSpec(o.model);
    std::vector<double> theta = o.theta.empty() ? DefaultTheta(model, o.model) : ReadTheta(o.theta);
    if (!o.theta.empty()) m.AddInput(o.theta);
    agent = AgentSpec::FromModel(std::move(model), std::move(theta));
  }
  if (!o.roster.empty()) m.AddInput(o.roster);
  const std::vector<BotSpec> bots = SelectBots(LoadBots(o.roster), o.bots);
  SimulateConfig cfg;
  cfg.games_per_bot = o.games;
  cfg.rounds = o.rounds;
  cfg.seed = o.seed;
  cfg.agent_label = o.label;
  cfg.jobs = o.jobs;
  const Dataset data = SimulateGames(agent, bots, cfg);
  SaveDataset(data, o.out);

  const WinRateStats stats = ComputeWinRates(data.games);
  m.config = {{"agent", agent.Label()}, {"bots", o.bots}, {"games_per_bot", o.games},
              {"rounds", o.rounds},     {"label", data.header.agent_label}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {o.out};
  m.extra = {{"win_rates", WinRateStatsToJson(stats)}};
  m.Write(ManifestPathFor(o.out));
  nlohmann::json summary = {{"games", data.games.size()},
                            {"aggregate_win_rate", stats.aggregate.mean}};
  for (const auto& [bot, ci] : stats.per_bot) {
    summary["per_bot"][std::to_string(bot)] = ci.mean;
  }
  std::cout << summary.dump() << "\n";
}

struct CollectOpts {
  std::string config;
  std::string bots = "all";
  std::string roster;
  int games = 20;
  int rounds = kDefaultRounds;
  std::uint64_t seed = 0;
  std::string out;
};

void RunCollect(const CollectOpts& o) {
  RunManifest m = BeginManifest("collect-llm", g_argv);
  m.AddInput(o.config);
  const LlmClientConfig client = LlmClientConfigFromJson(ReadJson(o.config));
  const std::vector<BotSpec> bots = SelectBots(LoadBots(o.roster), o.bots);
  CollectConfig cfg;
  cfg.games_per_bot = o.games;
  cfg.rounds = o.rounds;
  cfg.seed = o.seed;
  const CollectStats stats = CollectLlmGames(HttpLlmTransport(client), client, bots, cfg, o.out);
  m.config = {{"client", LlmClientConfigToJson(client)},
              {"bots", o.bots},
              {"games_per_bot", o.games},
              {"rounds", o.rounds},
              {"prompt_template_version", kPromptTemplateVersion}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {o.out};
  m.extra = {{"stats", stats.ToJson()}};
  m.Write(ManifestPathFor(o.out));
  std::cout << stats.ToJson().dump() << "\n";
}

struct PreprocessOpts {
  std::string in;
  std::string out;
  std::string config;
  std::string format = "auto";
  std::string label;
  std::string report;
  ColumnMap columns;
};

void RunPreprocess(const PreprocessOpts& o) {
  RunManifest m = BeginManifest("preprocess", g_argv);
  m.AddInput(o.in);
  PreprocessConfig cfg;
  if (!o.config.empty()) {
    m.AddInput(o.config);
    cfg = PreprocessConfigFromJson(ReadJson(o.config));
  }
  std::string format = o.format;
  if (format == "auto") {
    const std::string ext = fs::path(o.in).extension().string();
    format = (ext == ".csv" || ext == ".tsv" || ext == ".txt") ? "tabular" : "jsonl";
  }
  std::vector<RawGame> raw;
  DatasetHeader header;
  if (format == "tabular") {
    header.agent_label = o.label.empty() ? "human" : o.label;
    raw = ImportTabularFile(o.in, o.columns, header.agent_label);
  } else if (format == "jsonl") {
    const std::string text = ReadText(o.in);
    raw = ParseRawGames(text);
    // Keep the header of a dataset file when there is one.
    const auto first = text.find('\n');
    const nlohmann::json j =
        nlohmann::json::parse(text.substr(0, first), nullptr, /*allow_exceptions=*/false);
    if (j.is_object() && j.contains("schema_version")) {
      header.agent_label = j.value("agent_label", "");
      header.created = j.value("created", "");
      header.seed = j.value("seed", std::uint64_t{0});
    }
    if (!o.label.empty()) header.agent_label = o.label;
    if (header.agent_label.empty() && !raw.empty()) header.agent_label = raw[0].agent_label;
  } else {
    throw Error("unknown --format '" + o.format + "' (auto, jsonl or tabular)");
  }
  const PreprocessResult result = Preprocess(raw, cfg, header);
  SaveDataset(result.dataset, o.out);
  const std::string report = o.report.empty() ? WithSuffix(o.out, ".report.json").string() : o.report;
  WriteJson(report, result.report.ToJson());
  m.config = {{"preprocess", PreprocessConfigToJson(cfg)}, {"format", format}};
  m.outputs = {o.out, report};
  m.Write(ManifestPathFor(o.out));
  std::cout << nlohmann::json{{"games_in", result.report.games_in},
                              {"games_out", result.report.games_out},
                              {"actions", result.report.actions.size()}}
                   .dump()
            << "\n";
}

struct FitOpts {
  std::string model;
  std::string data;
  int restarts = 10;
  std::uint64_t seed = 0;
  std::string fit_config;
  std::string out;
  int jobs = 1;
};

void RunFit(const FitOpts& o) {
  RunManifest m = BeginManifest("fit", g_argv);
  const Model model = Model::FromSpec(o.model);
  const Dataset data = LoadData(o.data, m);
  if (!o.fit_config.empty()) m.AddInput(o.fit_config);
  const FitConfig cfg = MakeFitConfig(o.fit_config, o.restarts, o.seed, o.jobs);
  const FitResult fit = Fit(model, data.games, cfg);
  nlohmann::json out = FitResultToJson(fit);
  out["model"] = o.model;
  out["normalized_likelihood"] = NormalizedLikelihood(fit.nll, fit.predictions);
  WriteJson(o.out, out);
  m.config = {{"model", o.model}, {"fit", FitConfigToJson(cfg)}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {o.out};
  m.Write(ManifestPathFor(o.out));
  std::cout << nlohmann::json{{"nll", fit.nll},
                              {"normalized_likelihood", out["normalized_likelihood"]}}
                   .dump()
            << "\n";
}

struct EvaluateOpts {
  std::string model;
  std::string data;
  int restarts = 10;
  std::uint64_t seed = 0;
  std::string fit_config;
  std::string out;
  bool all_games = false;
  int jobs = 1;
};

void RunEvaluate(const EvaluateOpts& o) {
  RunManifest m = BeginManifest("evaluate", g_argv);
  const Model model = Model::FromSpec(o.model);
  const Dataset data = LoadData(o.data, m);
  if (!o.fit_config.empty()) m.AddInput(o.fit_config);
  const FitConfig cfg = MakeFitConfig(o.fit_config, o.restarts, o.seed, o.jobs);
  std::vector<GameTrajectory> games =
      o.all_games ? data.games : PartitionGames(data.games).eval;
  const EvalScore score = TwofoldCv(model, games, cfg, o.seed);
  nlohmann::json out = EvalScoreToJson(score);
  out["model"] = o.model;
  out["games"] = games.size();
  out["split"] = o.all_games ? "all" : "eval";
  WriteJson(o.out, out);
  m.config = {{"model", o.model}, {"fit", FitConfigToJson(cfg)}, {"split", out["split"]}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {o.out};
  m.Write(ManifestPathFor(o.out));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score.normalized_likelihood);
  std::cout << "normalized_likelihood " << buf << "\n";
}

struct DiscoverOpts {
  std::string train;
  int budget = 500;
  std::string mutator = "rule";
  std::string mutator_config;
  double epsilon = 0.005;
  std::uint64_t seed = 0;
  std::string search_config;
  std::string out;
  int jobs = 1;
};

void RunDiscover(const DiscoverOpts& o) {
  RunManifest m = BeginManifest("discover", g_argv);
  const Dataset data = LoadData(o.train, m);
  SearchConfig cfg;
  if (!o.search_config.empty()) {
    m.AddInput(o.search_config);
    cfg = SearchConfigFromJson(ReadJson(o.search_config));
  }
  cfg.budget = o.budget;
  cfg.epsilon = o.epsilon;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  std::unique_ptr<Mutator> mutator;
  if (o.mutator == "rule") {
    cfg.mutator = MutatorKind::kRule;
    mutator = std::make_unique<RuleMutator>();
  } else if (o.mutator == "external") {
    if (o.mutator_config.empty()) throw Error("--mutator external needs --mutator-config");
    m.AddInput(o.mutator_config);
    const nlohmann::json j = ReadJson(o.mutator_config);
    ExternalMutatorConfig ext;
    ext.url = j.at("url").get<std::string>();
    ext.api_key_env = j.value("api_key_env", "");
    ext.timeout_seconds = j.value("timeout_seconds", ext.timeout_seconds);
    cfg.mutator = MutatorKind::kExternal;
    mutator = std::make_unique<ExternalMutator>(HttpPromptTransport(ext));
  } else {
    throw Error("unknown --mutator '" + o.mutator + "' (rule or external)");
  }

  const Partition split = PartitionGames(data.games);
  const fs::path dir = o.out;
  fs::create_directories(dir);
  const fs::path archive_path = dir / "archive.jsonl";
  std::ofstream archive_out(archive_path, std::ios::binary | std::ios::trunc);
  if (!archive_out) throw Error("cannot write " + archive_path.string());
  const SearchResult result = Evolve(split.train, cfg, *mutator, [&](const Candidate& c) {
    archive_out << Archive::CandidateToJson(c).dump() << '\n';
    archive_out.flush();
  });
  archive_out.close();

  // Frontier members are re-scored on the held-out split.
  const std::map<std::string, double> eval_scores =
      ScoreFrontier(result.archive, split.eval, cfg.fit, o.seed, o.jobs);
  nlohmann::json frontier = nlohmann::json::array();
  nlohmann::json eval_json = nlohmann::json::object();
  const std::vector<const Candidate*> front = result.archive.Frontier();
  for (const Candidate* c : front) {
    eval_json[c->id] = eval_scores.at(c->id);
    frontier.push_back({{"id", c->id},
                        {"name", c->program.name},
                        {"train_score", c->train_score},
                        {"eval_score", eval_scores.at(c->id)},
                        {"effort", c->effort},
                        {"text", c->text}});
  }
  WriteJson(dir / "frontier.json", frontier);
  WriteJson(dir / "eval_scores.json", eval_json);
  const SbbResult sbb = SelectSbb(result.archive, eval_scores, cfg.epsilon);
  const Candidate& best = result.archive.Get(sbb.id);
  const nlohmann::json report = {{"sbb_id", sbb.id},
                                 {"name", best.program.name},
                                 {"mutation", best.mutation},
                                 {"eval_score", eval_scores.at(sbb.id)},
                                 {"train_score", best.train_score},
                                 {"effort", best.effort},
                                 {"global_max", sbb.global_max},
                                 {"threshold", sbb.threshold},
                                 {"epsilon", cfg.epsilon},
                                 {"eligible", sbb.eligible},
                                 {"text", best.text}};
  WriteJson(dir / "sbb.json", report);
  WriteText(dir / "sbb.dsl", best.text + "\n");
  WriteJson(dir / "diagnostics.json", result.diagnostics.ToJson());
  m.config = {{"search", SearchConfigToJson(cfg)},
              {"mutator", o.mutator},
              {"train_games", split.train.size()},
              {"eval_games", split.eval.size()}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {archive_path.string(),
               (dir / "frontier.json").string(),
               (dir / "eval_scores.json").string(),
               (dir / "sbb.json").string(),
               (dir / "sbb.dsl").string(),
               (dir / "diagnostics.json").string()};
  m.extra = {{"diagnostics", result.diagnostics.ToJson()}};
  m.Write(dir / "manifest.json");
  std::cout << nlohmann::json{{"archive", result.archive.size()},
                              {"frontier", front.size()},
                              {"sbb", sbb.id},
                              {"sbb_name", best.program.name}}
                   .dump()
            << "\n";
}

struct XgenOpts {
  std::string programs;
  std::vector<std::string> datasets;
  int restarts = 10;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
};

void RunXgen(const XgenOpts& o) {
  RunManifest m = BeginManifest("analyze xgen", g_argv);
  std::vector<NamedModel> programs;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.programs)) {
    if (entry.path().extension() == ".dsl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no .dsl programs in " + o.programs);
  for (const fs::path& f : files) {
    m.AddInput(f);
    programs.push_back({f.stem().string(), Model::FromProgram(dsl::ParseFile(f))});
  }
  std::vector<NamedDataset> datasets;
  for (const std::string& path : o.datasets) {
    datasets.push_back({fs::path(path).stem().string(), LoadData(path, m).games});
  }
  FitConfig cfg = MakeFitConfig("", o.restarts, o.seed, 1);
  const XgenMatrix matrix = CrossGeneralization(programs, datasets, cfg, o.seed, o.jobs);
  WriteJson(o.out, matrix.ToJson());
  const fs::path csv = WithSuffix(o.out, ".csv");
  WriteText(csv, matrix.ToCsv());
  m.config = {{"fit", FitConfigToJson(cfg)}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {o.out, csv.string()};
  m.Write(ManifestPathFor(o.out));
  std::cout << matrix.ToCsv();
}

struct WinratesOpts {
  std::string data;
  int window = 30;
  bool bootstrap = false;
  int resamples = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

void RunWinrates(const WinratesOpts& o) {
  RunManifest m = BeginManifest("analyze winrates", g_argv);
  const Dataset data = LoadData(o.data, m);
  WinRateOptions opts;
  opts.window = o.window;
  opts.bootstrap = o.bootstrap;
  opts.resamples = o.resamples;
  opts.seed = o.seed;
  const WinRateStats stats = ComputeWinRates(data.games, opts);
  WriteJson(o.out, WinRateStatsToJson(stats));
  const fs::path csv = WithSuffix(o.out, ".csv");
  WriteText(csv, WinRateStatsToCsv(stats));
  m.config = {{"window", o.window}, {"bootstrap", o.bootstrap}, {"resamples", o.resamples}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {o.out, csv.string()};
  m.Write(ManifestPathFor(o.out));
  std::cout << WinRateStatsToCsv(stats);
}

struct ReplayOpts {
  std::string model;
  std::string theta;
  std::string data;
  int restarts = 10;
  std::uint64_t seed = 0;
  int window = 30;
  std::string out;
  int jobs = 1;
};

void RunReplay(const ReplayOpts& o) {
  RunManifest m = BeginManifest("analyze replay", g_argv);
  const Model model = Model::FromSpec(o.model);
  const Dataset data = LoadData(o.data, m);
  std::vector<double> theta;
  nlohmann::json fit_json = nullptr;
  if (!o.theta.empty()) {
    m.AddInput(o.theta);
    theta = ReadTheta(o.theta);
  } else if (model.param_count() > 0) {
    const FitConfig cfg = MakeFitConfig("", o.restarts, DeriveSeed(o.seed, "fit"), o.jobs);
    const FitResult fit = Fit(model, data.games, cfg);
    theta = fit.theta;
    fit_json = FitResultToJson(fit);
  }
  WinRateOptions opts;
  opts.window = o.window;
  const ReplayResult r = ReplayEval(model, theta, data.games, o.seed, opts);
  const nlohmann::json out = {{"model", o.model},
                              {"theta", theta},
                              {"synthetic", WinRateStatsToJson(r.synthetic_stats)},
                              {"ground_truth", WinRateStatsToJson(r.ground_truth_stats)}};
  WriteJson(o.out, out);
  m.config = {{"model", o.model}, {"window", o.window}, {"fit", fit_json}};
  m.seeds = {{"seed", o.seed}};
  m.outputs = {o.out};
  m.Write(ManifestPathFor(o.out));
  std::cout << nlohmann::json{{"synthetic", r.synthetic_stats.aggregate.mean},
                              {"ground_truth", r.ground_truth_stats.aggregate.mean}}
                   .dump()
            << "\n";
}

struct ServeOpts {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string roster;
  std::string persist;
  int rounds = kDefaultRounds;
  std::uint64_t seed = 0;
  std::string cors_origin = "*";
};

HttpServer* g_server = nullptr;

void RunServe(const ServeOpts& o) {
  ServiceConfig cfg;
  cfg.roster = LoadBots(o.roster);
  cfg.rounds = o.rounds;
  cfg.seed = o.seed;
  cfg.cors_origin = o.cors_origin;
  if (!o.persist.empty()) cfg.persist_dir = o.persist;
  SessionService service(cfg);
  const int loaded = service.LoadPersisted();
  HttpServer server(service);
  const int port = server.Start(o.host, o.port);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->Stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->Stop();
  });
  std::cerr << nlohmann::json{{"listening", o.host + ":" + std::to_string(port)},
                              {"sessions_restored", loaded}}
                   .dump()
            << std::endl;
  server.Wait();
  g_server = nullptr;
}

void PrintError(const std::string& type, const std::string& message) {
  std::cerr << nlohmann::json{{"error", {{"type", type}, {"message", message}}}}.dump()
            << std::endl;
}

int Main(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);
  CLI::App app{"Strategy discovery toolkit for repeated Rock, Paper, Scissors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BuildVersion());

  SimulateOpts sim;
  auto* s = app.add_subcommand("simulate", "Play an agent against the bot roster");
  s->add_option("--agent", sim.agent, "random, oracle or model")->capture_default_str();
  s->add_option("--model", sim.model, "Model spec when --agent model")->capture_default_str();
  s->add_option("--theta", sim.theta, "Fit result JSON with model parameters");
  s->add_option("--bots", sim.bots, "all, ID, A..B or A,B,C")->capture_default_str();
  s->add_option("--roster", sim.roster, "Bot roster JSON (default: built-in roster)");
  s->add_option("--games", sim.games, "Games per bot")->capture_default_str();
  s->add_option("--rounds", sim.rounds, "Rounds per game")->capture_default_str();
  s->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  s->add_option("--label", sim.label, "Agent label (default derived from agent)");
  s->add_option("--out", sim.out, "Output dataset JSONL")->required();
  s->add_option("--jobs", sim.jobs, "Worker threads")->capture_default_str();
  s->callback([&] { RunSimulate(sim); });

  CollectOpts col;
  auto* c = app.add_subcommand("collect-llm", "Collect games from a chat-completion endpoint");
  c->add_option("--config", col.config, "LLM client config JSON")->required();
  c->add_option("--bots", col.bots, "all, ID, A..B or A,B,C")->capture_default_str();
  c->add_option("--roster", col.roster, "Bot roster JSON (default: built-in roster)");
  c->add_option("--games", col.games, "Games per bot")->capture_default_str();
  c->add_option("--rounds", col.rounds, "Rounds per game")->capture_default_str();
  c->add_option("--seed", col.seed, "Seed")->capture_default_str();
  c->add_option("--out", col.out, "Output raw JSONL (resumed when it exists)")->required();
  c->callback([&] { RunCollect(col); });

  PreprocessOpts pre;
  auto* p = app.add_subcommand("preprocess", "Clean raw games into a dataset");
  p->add_option("--in", pre.in, "Raw JSONL or CSV/TSV export")->required();
  p->add_option("--out", pre.out, "Output dataset JSONL")->required();
  p->add_option("--config", pre.config, "Preprocessing config JSON");
  p->add_option("--format", pre.format, "auto, jsonl or tabular")->capture_default_str();
  p->add_option("--label", pre.label, "Agent label for the output");
  p->add_option("--report", pre.report, "Report path (default: <out> with a .report.json extension)");
  p->add_option("--col-game", pre.columns.game_id, "Game id column")->capture_default_str();
  p->add_option("--col-round", pre.columns.round, "Round column")->capture_default_str();
  p->add_option("--col-player", pre.columns.player_move, "Player move column")
      ->capture_default_str();
  p->add_option("--col-bot", pre.columns.bot_move, "Bot move column")->capture_default_str();
  p->add_option("--col-reward", pre.columns.reward, "Reward column");
  p->add_option("--col-outcome", pre.columns.outcome, "Outcome column (win/tie/loss)");
  p->add_option("--col-bot-id", pre.columns.bot_id, "Bot id column");
  p->callback([&] { RunPreprocess(pre); });

  FitOpts fit;
  auto* f = app.add_subcommand("fit", "Fit model parameters by maximum likelihood");
  f->add_option("--model", fit.model, "nash, csewa, builtin:NAME or dsl:FILE")->required();
  f->add_option("--data", fit.data, "Dataset JSONL")->required();
  f->add_option("--restarts", fit.restarts, "Random restarts")->capture_default_str();
  f->add_option("--seed", fit.seed, "Seed")->capture_default_str();
  f->add_option("--fit-config", fit.fit_config, "Optimizer config JSON");
  f->add_option("--out", fit.out, "Output fit JSON")->required();
  f->add_option("--jobs", fit.jobs, "Worker threads")->capture_default_str();
  f->callback([&] { RunFit(fit); });

  EvaluateOpts ev;
  auto* e = app.add_subcommand("evaluate", "Twofold cross-validated normalized likelihood");
  e->add_option("--model", ev.model, "nash, csewa, builtin:NAME or dsl:FILE")->required();
  e->add_option("--data", ev.data, "Dataset JSONL")->required();
  e->add_option("--restarts", ev.restarts, "Random restarts")->capture_default_str();
  e->add_option("--seed", ev.seed, "Seed")->capture_default_str();
  e->add_option("--fit-config", ev.fit_config, "Optimizer config JSON");
  e->add_flag("--all-games", ev.all_games, "Score every game instead of the eval split");
  e->add_option("--out", ev.out, "Output score JSON")->required();
  e->add_option("--jobs", ev.jobs, "Worker threads")->capture_default_str();
  e->callback([&] { RunEvaluate(ev); });

  DiscoverOpts disc;
  auto* d = app.add_subcommand("discover", "Evolve interpretable programs");
  d->add_option("--train", disc.train, "Dataset JSONL (partitioned into train/eval)")
      ->required();
  d->add_option("--budget", disc.budget, "Candidate evaluations")->capture_default_str();
  d->add_option("--mutator", disc.mutator, "rule or external")->capture_default_str();
  d->add_option("--mutator-config", disc.mutator_config,
                "External mutator JSON {url, api_key_env, timeout_seconds}");
  d->add_option("--epsilon", disc.epsilon, "SBB tolerance")->capture_default_str();
  d->add_option("--seed", disc.seed, "Seed")->capture_default_str();
  d->add_option("--search-config", disc.search_config, "Search config JSON");
  d->add_option("--out", disc.out, "Output directory")->required();
  d->add_option("--jobs", disc.jobs, "Worker threads")->capture_default_str();
  d->callback([&] { RunDiscover(disc); });

  auto* an = app.add_subcommand("analyze", "Analyses over datasets and programs");
  an->require_subcommand(1);
  XgenOpts xg;
  auto* x = an->add_subcommand("xgen", "Cross-generalization matrix");
  x->add_option("--programs", xg.programs, "Directory of .dsl programs")->required();
  x->add_option("--datasets", xg.datasets, "Dataset JSONL files")->required();
  x->add_option("--restarts", xg.restarts, "Random restarts")->capture_default_str();
  x->add_option("--seed", xg.seed, "Seed")->capture_default_str();
  x->add_option("--out", xg.out, "Output JSON (CSV written beside it)")->required();
  x->add_option("--jobs", xg.jobs, "Worker threads")->capture_default_str();
  x->callback([&] { RunXgen(xg); });

  WinratesOpts wr;
  auto* w = an->add_subcommand("winrates", "Win-rate tables");
  w->add_option("--data", wr.data, "Dataset JSONL")->required();
  w->add_option("--window", wr.window, "Window length in rounds")->capture_default_str();
  w->add_flag("--bootstrap", wr.bootstrap, "Bootstrap intervals instead of normal");
  w->add_option("--resamples", wr.resamples, "Bootstrap resamples")->capture_default_str();
  w->add_option("--seed", wr.seed, "Seed")->capture_default_str();
  w->add_option("--out", wr.out, "Output JSON (CSV written beside it)")->required();
  w->callback([&] { RunWinrates(wr); });

  ReplayOpts rp;
  auto* r = an->add_subcommand("replay", "Synthetic win rates from model samples");
  r->add_option("--model", rp.model, "nash, csewa, builtin:NAME or dsl:FILE")->required();
  r->add_option("--theta", rp.theta, "Fit result JSON (default: fit on --data)");
  r->add_option("--data", rp.data, "Dataset JSONL")->required();
  r->add_option("--restarts", rp.restarts, "Random restarts")->capture_default_str();
  r->add_option("--seed", rp.seed, "Seed")->capture_default_str();
  r->add_option("--window", rp.window, "Window length in rounds")->capture_default_str();
  r->add_option("--out", rp.out, "Output JSON")->required();
  r->add_option("--jobs", rp.jobs, "Worker threads")->capture_default_str();
  r->callback([&] { RunReplay(rp); });

  ServeOpts sv;
  auto* v = app.add_subcommand("serve", "HTTP session service for live play");
  v->add_option("--host", sv.host, "Listen address")->capture_default_str();
  v->add_option("--port", sv.port, "Listen port (0 picks one)")->capture_default_str();
  v->add_option("--bots-config", sv.roster, "Bot roster JSON (default: built-in roster)");
  v->add_option("--persist", sv.persist, "Directory mirroring sessions to disk");
  v->add_option("--rounds", sv.rounds, "Rounds per session")->capture_default_str();
  v->add_option("--seed", sv.seed, "Seed")->capture_default_str();
  v->add_option("--cors-origin", sv.cors_origin, "Allowed browser origin")
      ->capture_default_str();
  v->callback([&] { RunServe(sv); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    return 2;
  } catch (const SchemaError& e) {
    PrintError("schema", e.what());
    return 1;
  } catch (const ContractViolation& e) {
    PrintError("contract", e.what());
    return 1;
  } catch (const Error& e) {
    PrintError("error", e.what());
    return 1;
  } catch (const std::exception& e) {
    PrintError("internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace irps

int main(int argc, char** argv) { return irps::Main(argc, argv); }
