// Copyright 2026 The litkg Authors. All Rights Reserved.
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

#ifndef LITKG_RANDOM_HPP
#define LITKG_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace litkg {

// Random streams used throughout the pipeline:
//
//   * SplitMix64 (Steele, Lea, Flood 2014) seeds generators and derives
//     independent substreams from (seed, key...) tuples.
//   * xoshiro256** (Blackman, Vigna 2018) is the working generator.
//   * uniform doubles take the top 53 bits: (x >> 11) * 2^-53.
//   * integers in [0, n) reject draws below 2^64 mod n, then reduce mod n.
//   * normal variates use the Box-Muller transform, caching nothing.
//
// The algorithms are fixed so that another implementation seeded the same
// way produces the same stream.

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n): rejection below 2^64 mod n, then modulo.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = (*this)();
      if (r >= threshold) return r % n;
    }
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4]{};
};

/// Seed for the substream identified by `keys` under `seed`. Each key is
/// folded through one SplitMix64 step, so (seed, a, b) and (seed, b, a)
/// give unrelated streams.
template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) {
  std::uint64_t h = SplitMix64(seed).next();
  ((h = SplitMix64(h ^ static_cast<std::uint64_t>(keys)).next()), ...);
  return h;
}

}  // namespace litkg

#endif  // LITKG_RANDOM_HPP
