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

// Maximum-likelihood fitting of one parameter vector to a whole dataset.
//
// Each restart draws theta from a standard normal in unconstrained space and
// runs AdaBelief. A restart stops when the relative change of the NLL over
// the trailing `window` steps drops below `rel_tol`, or after `max_steps`.
// The restart reports the best iterate it evaluated; the fit returns the
// restart with the lowest NLL (ties go to the lower restart index).

#ifndef IRPS_FITTING_H_
#define IRPS_FITTING_H_

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "irps/game.h"
#include "irps/models.h"
#include "irps/objective.h"
#include "json.hpp"

namespace irps {

struct FitConfig {
  double learning_rate = 5e-2;
  int max_steps = 10000;
  int window = 100;
  double rel_tol = 1e-2;
  int restarts = 10;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Game-level minibatching; 0 means full batch.
  int minibatch_games = 0;
  bool mask_padding = false;
  // Worker threads across restarts; <= 0 uses the hardware count.
  int jobs = 1;
};

struct RestartTrace {
  double nll = 0.0;  // best NLL of the run; +inf when it diverged
  int steps = 0;
  bool converged = false;
  bool diverged = false;
};

struct FitResult {
  std::vector<double> theta;
  double nll = 0.0;
  long predictions = 0;
  int steps_used = 0;
  int restart_index = 0;
  bool converged = false;
  std::vector<RestartTrace> restarts;
};

// Throws Error for an empty dataset or when every restart diverges.
FitResult Fit(const Model& model, std::span<const GameTrajectory> games, const FitConfig& cfg);

// Objective value and gradient at theta. Throwing counts as divergence.
using GradientFn = std::function<std::pair<double, std::vector<double>>(std::span<const double>)>;

struct MinimizeResult {
  std::vector<double> theta;  // best iterate
  double value = 0.0;
  int steps = 0;
  bool converged = false;
  bool diverged = false;
  // Objective value at every evaluated iterate, in order.
  std::vector<double> trace;
};

// One AdaBelief run from theta0 with the stopping rule above.
MinimizeResult AdaBeliefMinimize(const GradientFn& fn, std::vector<double> theta0,
                                 const FitConfig& cfg);

nlohmann::json FitConfigToJson(const FitConfig& cfg);
FitConfig FitConfigFromJson(const nlohmann::json& j);
nlohmann::json FitResultToJson(const FitResult& result);

}  // namespace irps

#endif  // IRPS_FITTING_H_
