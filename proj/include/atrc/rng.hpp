// Copyright 2026 The atrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATRC_RNG_HPP_
#define ATRC_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace atrc {

// splitmix64 finalizer. Every piece of randomness in the pipeline bottoms out
// here, so streams are identical across platforms and library versions
// (std::uniform_*_distribution is implementation-defined and never used).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (mix64(v) + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
}

// FNV-1a over the tag bytes, folded into the seed. Used to derive
// per-role sub-seeds from one master seed.
inline std::uint64_t hash_tag(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return hash_combine(seed, h);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n). Modulo bias is ~n / 2^64 which is far below every
  // statistical tolerance used in this project.
  std::uint64_t uniform_int(std::uint64_t n) { return n ? next_u64() % n : 0; }

  bool coin() { return (next_u64() & 1) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace atrc

#endif  // ATRC_RNG_HPP_
