// Copyright 2026 The awfl Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>

namespace awfl {

// Named seed streams. Every random quantity in a run is derived from one of
// these, so changing e.g. the fading seed never perturbs data generation.
struct SeedSet {
  std::uint64_t selection = 1;
  std::uint64_t fading = 2;
  std::uint64_t data = 3;
  std::uint64_t init = 4;
  std::uint64_t placement = 5;

  // Derives all five streams from a single run seed.
  static SeedSet from_base(std::uint64_t base);

  friend bool operator==(const SeedSet&, const SeedSet&) = default;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Order-sensitive hash of a key tuple, e.g. (seed, client, round).
std::uint64_t hash_key(std::initializer_list<std::uint64_t> parts) noexcept;

// Uniform double in [0, 1) that depends only on the key tuple. Used where a
// draw must be reproducible per (seed, client, round) without carrying
// generator state between rounds.
double keyed_uniform(std::initializer_list<std::uint64_t> parts) noexcept;

}  // namespace awfl
