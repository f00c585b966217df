// Copyright 2026 The uacoref Authors.
//
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

#ifndef UACOREF_RNG_HPP_
#define UACOREF_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace coref {

// splitmix64; used to derive well-mixed child seeds from a root seed.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// All randomness flows from one root seed, split per named stage so that
// stages stay independent and reproducible.
inline uint64_t derive_seed(uint64_t root, std::string_view stage, uint64_t salt = 0) {
  return splitmix64(root ^ fnv1a(stage) ^ (salt * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
}

inline std::mt19937_64 make_rng(uint64_t root, std::string_view stage, uint64_t salt = 0) {
  return std::mt19937_64(derive_seed(root, stage, salt));
}

}  // namespace coref

#endif  // UACOREF_RNG_HPP_
