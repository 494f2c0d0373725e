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

#ifndef LITKG_NODE2VEC_HPP
#define LITKG_NODE2VEC_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "litkg/alias_table.hpp"
#include "litkg/error.hpp"
#include "litkg/graph.hpp"
#include "litkg/parallel.hpp"
#include "litkg/random.hpp"

namespace litkg {

struct WalkParams {
  std::size_t walk_length = 10;     // steps per walk; a walk holds up to walk_length + 1 nodes
  std::size_t walks_per_node = 10;
  double p = 1.0;                   // return parameter
  double q = 1.0;                   // in-out parameter
  std::uint64_t seed = 0;
  bool eager_second_order = false;  // build every (t -> v) table up front
  unsigned threads = 1;

  void validate() const {
    if (walk_length < 1) throw InvalidArgument("walk_length must be >= 1");
    if (walks_per_node < 1) throw InvalidArgument("walks_per_node must be >= 1");
    if (!(p > 0.0)) throw InvalidArgument("p must be > 0");
    if (!(q > 0.0)) throw InvalidArgument("q must be > 0");
  }

  bool second_order() const { return p != 1.0 || q != 1.0; }
};

/// Dense, index-based view of an undirected weighted graph. Neighbor lists
/// are sorted by index so membership tests are a binary search.
struct WalkGraph {
  struct Arc {
    std::uint32_t to;
    double weight;
  };

  std::vector<std::string> ids;
  std::vector<std::vector<Arc>> adjacency;

  std::size_t size() const { return ids.size(); }

  bool has_edge(std::uint32_t a, std::uint32_t b) const {
    const auto& list = adjacency[a];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Arc& arc, std::uint32_t v) { return arc.to < v; });
    return it != list.end() && it->to == b;
  }

  /// Builds from an undirected edge list over `ids`. Self loops are
  /// rejected; repeated pairs are an error.
  static WalkGraph from_edges(std::vector<std::string> ids,
                              const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    WalkGraph g;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    g.ids = std::move(ids);
    g.adjacency.resize(g.ids.size());
    auto index = [&](const std::string& id) {
      auto it = std::lower_bound(g.ids.begin(), g.ids.end(), id);
      if (it == g.ids.end() || *it != id) throw InvalidArgument("edge endpoint not in node list: " + id);
      return static_cast<std::uint32_t>(it - g.ids.begin());
    };
    for (const auto& [a, b, w] : edges) {
      if (!(w > 0.0)) throw InvalidArgument("edge weights must be positive");
      const auto ia = index(a), ib = index(b);
      if (ia == ib) throw InvalidArgument("self loop on " + a);
      g.adjacency[ia].push_back({ib, w});
      g.adjacency[ib].push_back({ia, w});
    }
    for (auto& list : g.adjacency) {
      std::sort(list.begin(), list.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
      for (std::size_t i = 1; i < list.size(); ++i)
        if (list[i].to == list[i - 1].to) throw InvalidArgument("duplicate edge in walk graph");
    }
    return g;
  }

  static WalkGraph from_knowledge_graph(const KnowledgeGraph& kg) {
    std::vector<std::string> ids;
    ids.reserve(kg.nodes.size());
    for (const auto& [id, n] : kg.nodes) ids.push_back(id);
    std::vector<std::tuple<std::string, std::string, double>> edges;
    edges.reserve(kg.edges.size());
    for (const auto& [key, e] : kg.edges)
      edges.emplace_back(e.disease_id, e.other_id, static_cast<double>(e.weight));
    return from_edges(std::move(ids), edges);
  }
};

/// First-order alias tables per node and a lazily filled cache of
/// second-order tables per directed edge (prev -> cur). Reads of the cache
/// take a shared lock; insertion takes the exclusive lock.
class TransitionTables {
 public:
  TransitionTables(const WalkGraph& graph, const WalkParams& params)
      : graph_(&graph), p_(params.p), q_(params.q), second_order_(params.second_order()) {
    params.validate();
    first_order_.resize(graph.size());
    std::vector<double> w;
    for (std::size_t v = 0; v < graph.size(); ++v) {
      const auto& arcs = graph.adjacency[v];
      if (arcs.empty()) continue;
      w.clear();
      for (const auto& a : arcs) w.push_back(a.weight);
      first_order_[v] = AliasTable(w);
    }
    if (second_order_ && params.eager_second_order) {
      for (std::uint32_t t = 0; t < graph.size(); ++t)
        for (const auto& a : graph.adjacency[t]) (void)second(t, a.to);
    }
  }

  TransitionTables(const TransitionTables&) = delete;
  TransitionTables& operator=(const TransitionTables&) = delete;

  bool uses_second_order() const { return second_order_; }

  /// nullptr for a node without neighbors.
  const AliasTable* first(std::uint32_t v) const {
    return first_order_[v].empty() ? nullptr : &first_order_[v];
  }

  /// Distribution over cur's neighbors given the walk arrived from prev.
  /// Falls back to the first-order table when p = q = 1.
  const AliasTable* second(std::uint32_t prev, std::uint32_t cur) const {
    if (!second_order_) return first(cur);
    if (first_order_[cur].empty()) return nullptr;
    const std::uint64_t key = (static_cast<std::uint64_t>(prev) << 32) | cur;
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second.get();
    }
    auto table = std::make_unique<AliasTable>(second_order_weights(prev, cur));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(key, std::move(table));
    return it->second.get();
  }

  /// Unnormalized node2vec bias times edge weight over cur's neighbors:
  /// 1/p back to prev, 1 for common neighbors of prev and cur, 1/q else.
  std::vector<double> second_order_weights(std::uint32_t prev, std::uint32_t cur) const {
    const auto& arcs = graph_->adjacency[cur];
    std::vector<double> w;
    w.reserve(arcs.size());
    for (const auto& a : arcs) {
      double bias;
      if (a.to == prev)
        bias = 1.0 / p_;
      else if (graph_->has_edge(prev, a.to))
        bias = 1.0;
      else
        bias = 1.0 / q_;
      w.push_back(a.weight * bias);
    }
    return w;
  }

  std::size_t cached_second_order() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  const WalkGraph* graph_;
  double p_, q_;
  bool second_order_;
  std::vector<AliasTable> first_order_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, std::unique_ptr<AliasTable>> cache_;
};

inline std::unique_ptr<TransitionTables> precompute_transitions(const WalkGraph& graph,
                                                                const WalkParams& params) {
  if (graph.size() == 0) throw InvalidArgument("cannot precompute transitions on an empty graph");
  return std::make_unique<TransitionTables>(graph, params);
}

struct WalkCorpus {
  std::vector<std::string> ids;                   // index -> concept id
  std::vector<std::vector<std::uint32_t>> walks;  // ordered by (round, start node)
  WalkParams params;
};

/// Walk for slot (round, start): its own xoshiro256** stream seeded from
/// derive_seed(params.seed, start, round).
inline std::vector<std::uint32_t> walk_from(const WalkGraph& graph, const TransitionTables& tables,
                                            const WalkParams& params, std::uint32_t start,
                                            std::uint64_t round) {
  Xoshiro256 rng(derive_seed(params.seed, start, round));
  std::vector<std::uint32_t> walk;
  walk.reserve(params.walk_length + 1);
  walk.push_back(start);
  for (std::size_t step = 0; step < params.walk_length; ++step) {
    const std::uint32_t cur = walk.back();
    const AliasTable* table =
        walk.size() == 1 ? tables.first(cur) : tables.second(walk[walk.size() - 2], cur);
    if (!table) break;  // dead end
    walk.push_back(graph.adjacency[cur][table->sample(rng)].to);
  }
  return walk;
}

/// walks_per_node rounds, each starting one walk from every node in index
/// order. Output is identical for any thread count.
inline WalkCorpus generate_walks(const WalkGraph& graph, const TransitionTables& tables,
                                 const WalkParams& params) {
  params.validate();
  WalkCorpus corpus;
  corpus.ids = graph.ids;
  corpus.params = params;
  const std::size_t n = graph.size();
  if (n == 0) return corpus;
  corpus.walks.resize(n * params.walks_per_node);
  parallel_for(corpus.walks.size(), params.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t slot = b; slot < e; ++slot) {
      const auto round = slot / n;
      const auto start = static_cast<std::uint32_t>(slot % n);
      corpus.walks[slot] = walk_from(graph, tables, params, start, round);
    }
  });
  return corpus;
}

/// One walk per line, space separated concept ids.
inline std::string write_walks(const WalkCorpus& corpus, const Provenance& prov = {}) {
  std::string out = "# " + prov.render() + "\n";
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out += ' ';
      out += corpus.ids[walk[i]];
    }
    out += '\n';
  }
  return out;
}

}  // namespace litkg

#endif  // LITKG_NODE2VEC_HPP
