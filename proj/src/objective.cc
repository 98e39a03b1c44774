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

#include "irps/objective.h"

#include <string>

#include "irps/error.h"
#include "kernels/backends.h"

namespace irps {
namespace {

void CheckTheta(const Model& model, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != model.param_count()) {
    throw ContractViolation("model '" + model.name() + "' takes " +
                            std::to_string(model.param_count()) + " parameters, got " +
                            std::to_string(theta.size()));
  }
}

}  // namespace

NllValue Nll(const Model& model, std::span<const double> theta,
             std::span<const GameTrajectory> games, const ScoreOptions& options) {
  CheckTheta(model, theta);
  return kernels::scalar_impl::NllOnly(model, theta, games, options);
}

NllGrad NllAndGradient(const Model& model, std::span<const double> theta,
                       std::span<const GameTrajectory> games, const ScoreOptions& options,
                       std::optional<kernels::Backend> backend) {
  CheckTheta(model, theta);
  const kernels::Backend b = backend.value_or(kernels::ActiveBackend());
#if defined(IRPS_HAVE_AVX2_TU)
  if (b == kernels::Backend::kAvx2) {
    if (!kernels::Avx2Available()) throw ContractViolation("AVX2 backend is not available");
    return kernels::avx2_impl::NllAndGrad(model, theta, games, options);
  }
#else
  if (b == kernels::Backend::kAvx2) throw ContractViolation("AVX2 backend is not compiled in");
#endif
  return kernels::scalar_impl::NllAndGrad(model, theta, games, options);
}

}  // namespace irps
