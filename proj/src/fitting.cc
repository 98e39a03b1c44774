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

#include "irps/fitting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "irps/error.h"
#include "irps/parallel.h"
#include "irps/rng.h"

namespace irps {

MinimizeResult AdaBeliefMinimize(const GradientFn& fn, std::vector<double> theta0,
                                 const FitConfig& cfg) {
  const std::size_t n = theta0.size();
  MinimizeResult out;
  out.theta = theta0;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<double> theta = std::move(theta0);
  std::vector<double> m(n, 0.0);
  std::vector<double> s(n, 0.0);
  double b1t = 1.0;
  double b2t = 1.0;
  for (int step = 0; step <= cfg.max_steps; ++step) {
    double value;
    std::vector<double> grad;
    try {
      std::tie(value, grad) = fn(theta);
    } catch (const Error&) {
      out.diverged = true;
      break;
    }
    bool finite = std::isfinite(value);
    for (double g : grad) finite = finite && std::isfinite(g);
    if (!finite) {
      out.diverged = true;
      break;
    }
    out.trace.push_back(value);
    if (value < out.value) {
      out.value = value;
      out.theta = theta;
    }
    out.steps = step;
    const int t = static_cast<int>(out.trace.size()) - 1;
    if (t >= cfg.window) {
      const double past = out.trace[t - cfg.window];
      const double rel = std::fabs(past - value) / std::max(std::fabs(past), 1e-300);
      if (rel < cfg.rel_tol) {
        out.converged = true;
        break;
      }
    }
    if (step == cfg.max_steps) break;
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (std::size_t k = 0; k < n; ++k) {
      m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grad[k];
      const double dev = grad[k] - m[k];
      s[k] = cfg.beta2 * s[k] + (1.0 - cfg.beta2) * dev * dev + cfg.epsilon;
      const double mhat = m[k] / (1.0 - b1t);
      const double shat = s[k] / (1.0 - b2t);
      theta[k] -= cfg.learning_rate * mhat / (std::sqrt(shat) + cfg.epsilon);
    }
  }
  // A run that produced at least one finite value is usable even if a later
  // iterate blew up.
  if (!out.trace.empty()) out.diverged = false;
  return out;
}

FitResult Fit(const Model& model, std::span<const GameTrajectory> games, const FitConfig& cfg) {
  if (games.empty()) throw Error("cannot fit on an empty dataset");
  if (cfg.restarts < 1) throw Error("restarts must be >= 1");
  const ScoreOptions opts{cfg.mask_padding};
  const int np = model.param_count();
  FitResult result;
  if (np == 0) {
    const NllValue v = Nll(model, {}, games, opts);
    result.nll = v.nll;
    result.predictions = v.predictions;
    result.converged = true;
    result.restarts.push_back({v.nll, 0, true, false});
    return result;
  }

  std::vector<MinimizeResult> runs(cfg.restarts);
  ParallelFor(cfg.restarts, cfg.jobs, [&](int r) {
    Rng rng(DeriveSeed(cfg.seed, "restart", r));
    std::vector<double> theta0(np);
    for (double& x : theta0) x = rng.Normal();
    const bool minibatch =
        cfg.minibatch_games > 0 && cfg.minibatch_games < static_cast<int>(games.size());
    Rng batch_rng(DeriveSeed(cfg.seed, "minibatch", r));
    std::vector<GameTrajectory> batch;
    GradientFn fn = [&](std::span<const double> theta) {
      if (!minibatch) {
        NllGrad g = NllAndGradient(model, theta, games, opts);
        return std::make_pair(g.nll, std::move(g.grad));
      }
      batch.clear();
      std::vector<int> idx(games.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
      std::shuffle(idx.begin(), idx.end(), batch_rng.engine());
      for (int i = 0; i < cfg.minibatch_games; ++i) batch.push_back(games[idx[i]]);
      NllGrad g = NllAndGradient(model, theta, batch, opts);
      const double scale = static_cast<double>(games.size()) / cfg.minibatch_games;
      for (double& x : g.grad) x *= scale;
      return std::make_pair(g.nll * scale, std::move(g.grad));
    };
    runs[r] = AdaBeliefMinimize(fn, theta0, cfg);
    if (minibatch && !runs[r].diverged) {
      runs[r].value = Nll(model, runs[r].theta, games, opts).nll;
    }
  });

  int best = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    const MinimizeResult& run = runs[r];
    RestartTrace trace;
    trace.diverged = run.diverged;
    trace.nll = run.diverged ? std::numeric_limits<double>::infinity() : run.value;
    trace.steps = run.steps;
    trace.converged = run.converged;
    result.restarts.push_back(trace);
    if (!run.diverged && (best < 0 || run.value < runs[best].value)) best = r;
  }
  if (best < 0) throw Error("all " + std::to_string(cfg.restarts) + " restarts diverged");
  result.theta = runs[best].theta;
  result.nll = runs[best].value;
  result.steps_used = runs[best].steps;
  result.restart_index = best;
  result.converged = runs[best].converged;
  result.predictions = Nll(model, result.theta, games, opts).predictions;
  return result;
}

nlohmann::json FitConfigToJson(const FitConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"max_steps", c.max_steps},
          {"window", c.window},
          {"rel_tol", c.rel_tol},
          {"restarts", c.restarts},
          {"seed", c.seed},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"minibatch_games", c.minibatch_games},
          {"mask_padding", c.mask_padding}};
}

FitConfig FitConfigFromJson(const nlohmann::json& j) {
  FitConfig c;
  if (!j.is_object()) throw SchemaError("fit config must be a JSON object");
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.max_steps = j.value("max_steps", c.max_steps);
    c.window = j.value("window", c.window);
    c.rel_tol = j.value("rel_tol", c.rel_tol);
    c.restarts = j.value("restarts", c.restarts);
    c.seed = j.value("seed", c.seed);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.minibatch_games = j.value("minibatch_games", c.minibatch_games);
    c.mask_padding = j.value("mask_padding", c.mask_padding);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("fit config: ") + e.what());
  }
  if (c.learning_rate <= 0 || c.max_steps < 0 || c.window < 1 || c.rel_tol <= 0 ||
      c.restarts < 1) {
    throw SchemaError("fit config: values must be positive and restarts >= 1");
  }
  return c;
}

nlohmann::json FitResultToJson(const FitResult& r) {
  nlohmann::json restarts = nlohmann::json::array();
  for (const RestartTrace& t : r.restarts) {
    restarts.push_back({{"nll", t.diverged ? nlohmann::json(nullptr) : nlohmann::json(t.nll)},
                        {"steps", t.steps},
                        {"converged", t.converged},
                        {"diverged", t.diverged}});
  }
  return {{"theta", r.theta},
          {"nll", r.nll},
          {"predictions", r.predictions},
          {"steps_used", r.steps_used},
          {"restart_index", r.restart_index},
          {"converged", r.converged},
          {"restarts", restarts}};
}

}  // namespace irps
