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

// Reference backend: tangent lanes updated with plain loops.

#include "kernels/backends.h"

#define IRPS_KERNEL_NS scalar_impl
#include "kernels/eval_impl.h"

namespace irps::kernels::scalar_impl {

NllValue NllOnly(const Model& model, std::span<const double> theta,
                 std::span<const GameTrajectory> games, const ScoreOptions& options) {
  const NllGrad r = Evaluate<double>(model, theta, games, options);
  return {r.nll, r.predictions};
}

NllGrad NllAndGrad(const Model& model, std::span<const double> theta,
                   std::span<const GameTrajectory> games, const ScoreOptions& options) {
  return EvaluateWithGradient<ScalarOps>(model, theta, games, options);
}

void Tangent(TangentOp op, int width, double* dst, double a, const double* x, double b,
             const double* y) {
  ApplyTangentOp<ScalarOps>(op, width, dst, a, x, b, y);
}

}  // namespace irps::kernels::scalar_impl
