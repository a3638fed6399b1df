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

#include "awfl/rng.hpp"

namespace awfl {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_key(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t part : parts) h = mix64(h ^ mix64(part));
  return h;
}

double keyed_uniform(std::initializer_list<std::uint64_t> parts) noexcept {
  return static_cast<double>(hash_key(parts) >> 11) * 0x1.0p-53;
}

SeedSet SeedSet::from_base(std::uint64_t base) {
  return SeedSet{hash_key({base, 1}), hash_key({base, 2}), hash_key({base, 3}),
                 hash_key({base, 4}), hash_key({base, 5})};
}

}  // namespace awfl
