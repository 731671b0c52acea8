// Copyright 2026 The urne Authors
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

#ifndef URNE_RNG_H_
#define URNE_RNG_H_

#include <cstdint>
#include <string>
#include <vector>

namespace urne {

// splitmix64. Every stage that samples derives its stream from an explicit
// seed, so reruns with the same config are byte-identical. std::mt19937 with
// the standard distributions is not portable across library implementations;
// this generator and the draws below are pinned.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t draw;
    do {
      draw = Next();
    } while (draw >= limit);
    return lo + static_cast<int64_t>(draw % span);
  }

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::vector<T>* items) {
    for (size_t i = items->size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(0, static_cast<int64_t>(i) - 1));
      std::swap((*items)[i - 1], (*items)[j]);
    }
  }

  // First k of a seeded shuffle; input order does not leak into the result
  // beyond the shuffle itself.
  template <typename T>
  std::vector<T> SampleWithoutReplacement(std::vector<T> items, size_t k) {
    Shuffle(&items);
    if (items.size() > k) items.resize(k);
    return items;
  }

 private:
  uint64_t state_;
};

// FNV-1a, used both for config hashing and for deriving per-key substreams.
inline uint64_t HashBytes(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t HashString(const std::string& s, uint64_t seed = 0xcbf29ce484222325ULL) {
  return HashBytes(s.data(), s.size(), seed);
}

// Derives an independent child seed, e.g. one stream per named entity.
inline uint64_t ChildSeed(uint64_t seed, const std::string& tag) {
  uint64_t h = HashString(tag);
  return HashBytes(&seed, sizeof(seed), h);
}

}  // namespace urne

#endif  // URNE_RNG_H_
