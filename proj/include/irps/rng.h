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

#ifndef IRPS_RNG_H_
#define IRPS_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "irps/game.h"

namespace irps {

// 64-bit FNV-1a. Stable across platforms; used for ids and file digests.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// Deterministic sub-seed derivation. Every random stream in a command is
// derived from the command seed through this function.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t salt);
std::uint64_t DeriveSeed(std::uint64_t base, std::string_view tag);
std::uint64_t DeriveSeed(std::uint64_t base, std::string_view tag,
                         std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double Normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  // Uniform integer in [0, n).
  int UniformInt(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  Action UniformAction() { return static_cast<Action>(UniformInt(kNumActions)); }
  // Samples an index from a probability vector (need not be exactly
  // normalized).
  int Categorical(std::span<const double> probs);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace irps

#endif  // IRPS_RNG_H_
