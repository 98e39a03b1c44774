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

// Entry points exported by each backend translation unit.

#ifndef IRPS_SRC_KERNELS_BACKENDS_H_
#define IRPS_SRC_KERNELS_BACKENDS_H_

#include <span>

#include "irps/game.h"
#include "irps/kernels.h"
#include "irps/models.h"
#include "irps/objective.h"

namespace irps::kernels {

namespace scalar_impl {
NllValue NllOnly(const Model& model, std::span<const double> theta,
                 std::span<const GameTrajectory> games, const ScoreOptions& options);
NllGrad NllAndGrad(const Model& model, std::span<const double> theta,
                   std::span<const GameTrajectory> games, const ScoreOptions& options);
void Tangent(TangentOp op, int width, double* dst, double a, const double* x, double b,
             const double* y);
}  // namespace scalar_impl

namespace avx2_impl {
NllGrad NllAndGrad(const Model& model, std::span<const double> theta,
                   std::span<const GameTrajectory> games, const ScoreOptions& options);
void Tangent(TangentOp op, int width, double* dst, double a, const double* x, double b,
             const double* y);
}  // namespace avx2_impl

}  // namespace irps::kernels

#endif  // IRPS_SRC_KERNELS_BACKENDS_H_
