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

#ifndef LITKG_ALIAS_TABLE_HPP
#define LITKG_ALIAS_TABLE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "litkg/error.hpp"
#include "litkg/random.hpp"

namespace litkg {

/// Walker's alias method (Vose's construction): O(n) build, O(1) draw.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw InvalidArgument("alias table needs at least one outcome");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw InvalidArgument("alias table weights must be non-negative");
      total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("alias table weights sum to zero");

    probabilities_.resize(n);
    for (std::size_t i = 0; i < n; ++i) probabilities_[i] = weights[i] / total;

    threshold_.assign(n, 1.0);
    alias_.resize(n);
    for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::uint32_t>(i);

    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = probabilities_[i] * static_cast<double>(n);
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      small.pop_back();
      const auto l = large.back();
      threshold_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    // Leftovers are 1 up to rounding.
    for (auto i : small) threshold_[i] = 1.0;
    for (auto i : large) threshold_[i] = 1.0;
  }

  std::size_t size() const noexcept { return probabilities_.size(); }
  bool empty() const noexcept { return probabilities_.empty(); }

  /// Normalized input distribution.
  std::span<const double> probabilities() const noexcept { return probabilities_; }

  std::size_t sample(Xoshiro256& rng) const {
    const auto i = static_cast<std::size_t>(rng.below(size()));
    return rng.uniform() < threshold_[i] ? i : alias_[i];
  }

  /// Probability mass implied by the alias structure itself. Equals
  /// probabilities() up to rounding; used to verify construction.
  std::vector<double> implied_distribution() const {
    const double n = static_cast<double>(size());
    std::vector<double> out(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
      out[i] += threshold_[i] / n;
      out[alias_[i]] += (1.0 - threshold_[i]) / n;
    }
    return out;
  }

 private:
  std::vector<double> probabilities_;
  std::vector<double> threshold_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace litkg

#endif  // LITKG_ALIAS_TABLE_HPP
