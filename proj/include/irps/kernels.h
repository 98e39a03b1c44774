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

// Backend selection for the likelihood/gradient kernels.
//
// The gradient evaluators carry one tangent lane per model parameter. The
// scalar backend updates tangents with plain loops; the AVX2 backend uses
// 256-bit FMA. The backend is picked once from CPUID, and can be forced with
// IRPS_KERNEL=scalar|avx2 or SetBackendOverride().

#ifndef IRPS_KERNELS_H_
#define IRPS_KERNELS_H_

#include <optional>
#include <string_view>

namespace irps::kernels {

enum class Backend { kScalar, kAvx2 };

// True when the AVX2 kernels were compiled in and the CPU supports them.
bool Avx2Available();
Backend ActiveBackend();
void SetBackendOverride(std::optional<Backend> backend);
std::string_view BackendName(Backend backend);

// Tangent-lane primitives, exposed for equivalence tests:
//   kScale  dst = a * x
//   kAxpy   dst += a * x
//   kAxpby  dst = a * x + b * y
// `width` must be 4, 8 or 12.
enum class TangentOp { kScale, kAxpy, kAxpby };
void ApplyTangent(Backend backend, TangentOp op, int width, double* dst, double a,
                  const double* x, double b, const double* y);

}  // namespace irps::kernels

#endif  // IRPS_KERNELS_H_
