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

#include <atomic>
#include <cstdlib>
#include <string>

#include "irps/error.h"
#include "irps/kernels.h"
#include "kernels/backends.h"

namespace irps::kernels {
namespace {

// -1 = no override, otherwise a Backend value.
std::atomic<int> g_override{-1};

bool CpuHasAvx2() {
#if defined(IRPS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend Detect() {
  const bool avx2 = CpuHasAvx2();
  if (const char* env = std::getenv("IRPS_KERNEL")) {
    const std::string v(env);
    if (v == "scalar") return Backend::kScalar;
    if (v == "avx2" && avx2) return Backend::kAvx2;
  }
  return avx2 ? Backend::kAvx2 : Backend::kScalar;
}

}  // namespace

bool Avx2Available() {
  static const bool available = CpuHasAvx2();
  return available;
}

Backend ActiveBackend() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Backend>(o);
  static const Backend detected = Detect();
  return detected;
}

void SetBackendOverride(std::optional<Backend> backend) {
  if (backend == Backend::kAvx2 && !Avx2Available()) {
    throw ContractViolation("AVX2 backend is not available on this machine");
  }
  g_override.store(backend ? static_cast<int>(*backend) : -1, std::memory_order_relaxed);
}

std::string_view BackendName(Backend backend) {
  return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

void ApplyTangent(Backend backend, TangentOp op, int width, double* dst, double a,
                  const double* x, double b, const double* y) {
#if defined(IRPS_HAVE_AVX2_TU)
  if (backend == Backend::kAvx2) {
    if (!Avx2Available()) throw ContractViolation("AVX2 backend is not available");
    avx2_impl::Tangent(op, width, dst, a, x, b, y);
    return;
  }
#else
  if (backend == Backend::kAvx2) throw ContractViolation("AVX2 backend is not compiled in");
#endif
  scalar_impl::Tangent(op, width, dst, a, x, b, y);
}

}  // namespace irps::kernels
