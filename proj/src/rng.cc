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

#include "irps/rng.h"

namespace irps {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t salt) {
  return SplitMix64(SplitMix64(base) ^ salt);
}

std::uint64_t DeriveSeed(std::uint64_t base, std::string_view tag) {
  return DeriveSeed(base, Fnv1a64(tag));
}

std::uint64_t DeriveSeed(std::uint64_t base, std::string_view tag,
                         std::uint64_t index) {
  return DeriveSeed(DeriveSeed(base, tag), index);
}

int Rng::Categorical(std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  double u = Uniform() * total;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    if (u < probs[i]) return i;
    u -= probs[i];
  }
  // Rounding left `u` just above the last bucket.
  for (int i = static_cast<int>(probs.size()) - 1; i >= 0; --i) {
    if (probs[i] > 0) return i;
  }
  return 0;
}

}  // namespace irps
