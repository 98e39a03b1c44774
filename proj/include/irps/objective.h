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

// Negative log-likelihood of a dataset under a model.
//
// For each game the model is stepped through rounds 0..T-2 and the logits
// produced after round t are scored against the ego move of round t+1, so a
// game of T rounds contributes T-1 predictions. Gradients are exact
// (forward-mode dual numbers) and computed by the active SIMD backend.

#ifndef IRPS_OBJECTIVE_H_
#define IRPS_OBJECTIVE_H_

#include <optional>
#include <span>
#include <vector>

#include "irps/game.h"
#include "irps/kernels.h"
#include "irps/models.h"

namespace irps {

struct ScoreOptions {
  // Skip targets at or after GameTrajectory::padded_from.
  bool mask_padding = false;
};

struct NllValue {
  double nll = 0.0;
  long predictions = 0;
};

struct NllGrad {
  double nll = 0.0;
  std::vector<double> grad;
  long predictions = 0;
};

// Throws Error naming the game and round when logits are not finite, and
// ContractViolation when theta has the wrong length.
NllValue Nll(const Model& model, std::span<const double> theta,
             std::span<const GameTrajectory> games, const ScoreOptions& options = {});

NllGrad NllAndGradient(const Model& model, std::span<const double> theta,
                       std::span<const GameTrajectory> games,
                       const ScoreOptions& options = {},
                       std::optional<kernels::Backend> backend = std::nullopt);

}  // namespace irps

#endif  // IRPS_OBJECTIVE_H_
