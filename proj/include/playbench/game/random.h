// Copyright 2026 The Playbench Authors
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

// Seeded randomness that is reproducible across standard libraries.
// std::mt19937_64 output is fully specified, but the std distributions are
// not, so bounded draws and shuffles are done here.

#ifndef PLAYBENCH_GAME_RANDOM_H_
#define PLAYBENCH_GAME_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace playbench::rng {

using Engine = std::mt19937_64;

// Unbiased draw from [0, n). n must be positive.
inline std::uint64_t UniformIndex(Engine& engine, std::uint64_t n) {
  const std::uint64_t limit = Engine::max() - Engine::max() % n;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformReal(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(Engine& engine, double p) {
  return UniformReal(engine) < p;
}

template <typename T>
void Shuffle(Engine& engine, std::span<T> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(UniformIndex(engine, i));
    std::swap(items[i - 1], items[j]);
  }
}

// splitmix64 finalizer; used to derive independent per-stream seeds.
inline std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream) {
  return Mix(Mix(master) ^ (stream * 0xd1b54a32d192ed03ULL));
}

// FNV-1a, stable across platforms; for keying, not for security.
inline std::uint64_t HashString(std::string_view s,
                                std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace playbench::rng

#endif  // PLAYBENCH_GAME_RANDOM_H_
