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

#ifndef LITKG_GRAPH_HPP
#define LITKG_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "litkg/common.hpp"
#include "litkg/error.hpp"
#include "litkg/parallel.hpp"
#include "litkg/pubtator.hpp"

namespace litkg {

struct ConceptNode {
  std::string concept_id;
  std::string name;
  ConceptCategory category = ConceptCategory::Disease;
  std::size_t doc_frequency = 0;
  std::map<std::string, std::size_t> surface_counts;

  friend bool operator==(const ConceptNode&, const ConceptNode&) = default;
};

enum class RelationClass : std::uint8_t {
  DiseaseChemical,
  DiseaseGene,
  DiseaseSpecies,
  DiseaseSnpMutation,
  DiseaseDisease
};

inline constexpr std::array<RelationClass, 5> kAllRelations = {
    RelationClass::DiseaseChemical, RelationClass::DiseaseGene, RelationClass::DiseaseSpecies,
    RelationClass::DiseaseSnpMutation, RelationClass::DiseaseDisease};

/// Kebab-case key used by the CLI and in exported files.
constexpr std::string_view to_string(RelationClass r) {
  switch (r) {
    case RelationClass::DiseaseChemical: return "disease-chemical";
    case RelationClass::DiseaseGene: return "disease-gene";
    case RelationClass::DiseaseSpecies: return "disease-species";
    case RelationClass::DiseaseSnpMutation: return "disease-snp-mutation";
    case RelationClass::DiseaseDisease: return "disease-disease";
  }
  return "?";
}

inline std::optional<RelationClass> relation_from_string(std::string_view s) {
  for (auto r : kAllRelations)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

/// Undirected co-occurrence edge in canonical orientation: the Disease
/// endpoint is `disease_id`; between two diseases the smaller id is.
struct CoEdge {
  std::string disease_id;
  std::string other_id;
  ConceptCategory other_category = ConceptCategory::Disease;
  std::size_t weight = 0;
  std::set<std::string> pmids;

  friend bool operator==(const CoEdge&, const CoEdge&) = default;
};

constexpr RelationClass relation_class(const CoEdge& e) {
  switch (e.other_category) {
    case ConceptCategory::Chemical: return RelationClass::DiseaseChemical;
    case ConceptCategory::Gene: return RelationClass::DiseaseGene;
    case ConceptCategory::Species: return RelationClass::DiseaseSpecies;
    case ConceptCategory::SnpMutation: return RelationClass::DiseaseSnpMutation;
    case ConceptCategory::Disease: return RelationClass::DiseaseDisease;
  }
  return RelationClass::DiseaseDisease;
}

using EdgeKey = std::pair<std::string, std::string>;

/// Canonical (disease_id, other_id) for a pair where `a` is a Disease.
inline EdgeKey canonical_pair(const std::string& a, const std::string& b,
                              ConceptCategory b_category) {
  if (b_category == ConceptCategory::Disease && b < a) return {b, a};
  return {a, b};
}

struct Neighbor {
  std::string id;
  std::size_t weight = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Disease-centric co-occurrence graph plus the corpus-level concept
/// catalog it was built from. Concepts that never co-occur with a disease
/// live in `isolated` and do not appear in `nodes` or `adjacency`.
struct KnowledgeGraph {
  std::map<std::string, ConceptNode> nodes;
  std::map<std::string, ConceptNode> isolated;
  std::map<EdgeKey, CoEdge> edges;
  std::map<std::string, std::vector<Neighbor>> adjacency;
  std::set<std::string> corpus_pmids;
  std::vector<std::string> warnings;

  std::string fingerprint() const { return corpus_fingerprint(corpus_pmids); }

  const ConceptNode* find(const std::string& id) const {
    if (auto it = nodes.find(id); it != nodes.end()) return &it->second;
    if (auto it = isolated.find(id); it != isolated.end()) return &it->second;
    return nullptr;
  }

  std::string display_name(const std::string& id) const {
    const auto* n = find(id);
    return n ? n->name : id;
  }

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.nodes == b.nodes && a.isolated == b.isolated && a.edges == b.edges &&
           a.adjacency == b.adjacency && a.corpus_pmids == b.corpus_pmids;
  }
};

/// Most frequent surface form; ties go to the lexicographically smallest.
inline std::string pick_display_name(const std::map<std::string, std::size_t>& surfaces,
                                     const std::string& fallback) {
  const std::pair<const std::string, std::size_t>* best = nullptr;
  for (const auto& entry : surfaces)
    if (!best || entry.second > best->second) best = &entry;
  return best ? best->first : fallback;
}

namespace detail {

/// Recomputes weights, the node/isolated split, names and adjacency from
/// the catalog and edge pmid sets.
inline void finalize_graph(KnowledgeGraph& g) {
  std::map<std::string, ConceptNode> catalog;
  catalog.merge(g.nodes);
  catalog.merge(g.isolated);
  g.nodes.clear();
  g.isolated.clear();
  g.adjacency.clear();
  for (auto& [key, e] : g.edges) {
    e.weight = e.pmids.size();
    g.adjacency[e.disease_id].push_back({e.other_id, e.weight});
    g.adjacency[e.other_id].push_back({e.disease_id, e.weight});
  }
  for (auto& [id, list] : g.adjacency)
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (auto& [id, node] : catalog) {
    if (!node.surface_counts.empty())
      node.name = pick_display_name(node.surface_counts, id);
    else if (node.name.empty())
      node.name = id;
    if (g.adjacency.contains(id))
      g.nodes.emplace(id, std::move(node));
    else
      g.isolated.emplace(id, std::move(node));
  }
}

inline KnowledgeGraph build_shard(std::span<const AbstractDoc> docs) {
  KnowledgeGraph g;
  std::map<std::string, ConceptNode> catalog;
  for (const auto& doc : docs) {
    g.corpus_pmids.insert(doc.pmid);
    std::map<std::string, ConceptCategory> present;
    for (const auto& m : doc.mentions) {
      present.emplace(m.concept_id, m.category);
      auto& node = catalog[m.concept_id];
      node.concept_id = m.concept_id;
      node.category = m.category;
      ++node.surface_counts[m.surface];
    }
    for (const auto& [id, cat] : present) ++catalog[id].doc_frequency;
    for (const auto& [d, dcat] : present) {
      if (dcat != ConceptCategory::Disease) continue;
      for (const auto& [c, ccat] : present) {
        if (c == d) continue;
        auto key = canonical_pair(d, c, ccat);
        auto [it, fresh] = g.edges.try_emplace(key);
        if (fresh) {
          it->second.disease_id = key.first;
          it->second.other_id = key.second;
          it->second.other_category = ccat;
        }
        it->second.pmids.insert(doc.pmid);
      }
    }
  }
  g.nodes = std::move(catalog);
  finalize_graph(g);
  return g;
}

}  // namespace detail

/// Merges graphs built from disjoint PMID sets. Document frequencies and
/// surface tallies add, edge provenance sets union.
inline KnowledgeGraph merge(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  for (const auto& p : b.corpus_pmids)
    if (a.corpus_pmids.contains(p))
      throw DataError("cannot merge graphs sharing PMID " + p + " (would double count)");
  KnowledgeGraph g;
  g.corpus_pmids = a.corpus_pmids;
  g.corpus_pmids.insert(b.corpus_pmids.begin(), b.corpus_pmids.end());
  auto absorb = [&](const std::map<std::string, ConceptNode>& src) {
    for (const auto& [id, n] : src) {
      auto [it, fresh] = g.nodes.try_emplace(id, n);
      if (fresh) continue;
      it->second.doc_frequency += n.doc_frequency;
      for (const auto& [s, c] : n.surface_counts) it->second.surface_counts[s] += c;
    }
  };
  absorb(a.nodes);
  absorb(a.isolated);
  absorb(b.nodes);
  absorb(b.isolated);
  g.edges = a.edges;
  for (const auto& [key, e] : b.edges) {
    auto [it, fresh] = g.edges.try_emplace(key, e);
    if (!fresh) it->second.pmids.insert(e.pmids.begin(), e.pmids.end());
  }
  detail::finalize_graph(g);
  if (g.edges.empty() && !g.corpus_pmids.empty())
    g.warnings.push_back("graph has no edges: corpus contains no Disease co-occurrence");
  return g;
}

/// Builds the Disease-centric co-occurrence graph. Within one abstract every
/// distinct Disease concept is linked to every other distinct concept, and
/// each such pair gains that abstract's PMID once. With threads > 1 the
/// corpus is sharded and the partial graphs merged.
inline KnowledgeGraph build_graph(const Corpus& corpus, unsigned threads = 1) {
  KnowledgeGraph g;
  const auto& docs = corpus.docs;
  const unsigned shards = std::max(1u, std::min<unsigned>(threads, docs.size() / 64 + 1));
  if (shards == 1) {
    g = detail::build_shard(docs);
  } else {
    std::vector<KnowledgeGraph> parts(shards);
    const std::size_t chunk = (docs.size() + shards - 1) / shards;
    parallel_for(shards, shards, [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) {
        const std::size_t lo = std::min(docs.size(), s * chunk);
        const std::size_t hi = std::min(docs.size(), lo + chunk);
        parts[s] = detail::build_shard(std::span(docs).subspan(lo, hi - lo));
      }
    });
    for (auto& p : parts) g = merge(g, p);
    g.warnings.clear();
  }
  if (g.edges.empty())
    g.warnings.push_back("graph has no edges: corpus contains no Disease co-occurrence");
  return g;
}

// Graph file: JSON with a provenance block, the corpus PMID list, "nodes"
// sorted by concept_id, "isolated" concepts, and "edges" sorted by
// canonical pair.

inline std::string write_graph_json(const KnowledgeGraph& g, const Provenance& prov = {}) {
  using ordered = nlohmann::ordered_json;
  auto node_json = [](const ConceptNode& n) {
    ordered surfaces = ordered::object();
    for (const auto& [s, c] : n.surface_counts) surfaces[s] = c;
    return ordered{{"concept_id", n.concept_id},
                   {"name", n.name},
                   {"category", to_string(n.category)},
                   {"doc_frequency", n.doc_frequency},
                   {"surfaces", surfaces}};
  };
  ordered j;
  j["provenance"] = prov.fields;
  j["corpus"] = ordered{{"fingerprint", g.fingerprint()}, {"pmids", g.corpus_pmids}};
  j["nodes"] = ordered::array();
  for (const auto& [id, n] : g.nodes) j["nodes"].push_back(node_json(n));
  j["isolated"] = ordered::array();
  for (const auto& [id, n] : g.isolated) j["isolated"].push_back(node_json(n));
  j["edges"] = ordered::array();
  for (const auto& [key, e] : g.edges) {
    j["edges"].push_back(ordered{{"disease_id", e.disease_id},
                                 {"other_id", e.other_id},
                                 {"relation", to_string(relation_class(e))},
                                 {"weight", e.weight},
                                 {"pmids", e.pmids}});
  }
  return j.dump(1) + "\n";
}

inline KnowledgeGraph read_graph_json(std::string_view text) {
  KnowledgeGraph g;
  try {
    const auto j = nlohmann::json::parse(text);
    auto read_node = [](const nlohmann::json& jn) {
      ConceptNode n;
      n.concept_id = jn.at("concept_id").get<std::string>();
      n.name = jn.at("name").get<std::string>();
      const auto cat = category_from_string(jn.at("category").get<std::string>());
      if (!cat) throw DataError("unknown category for node " + n.concept_id);
      n.category = *cat;
      n.doc_frequency = jn.at("doc_frequency").get<std::size_t>();
      if (jn.contains("surfaces"))
        n.surface_counts = jn["surfaces"].get<std::map<std::string, std::size_t>>();
      return n;
    };
    std::map<std::string, ConceptNode> catalog;
    for (const auto& jn : j.at("nodes")) {
      auto n = read_node(jn);
      catalog.emplace(n.concept_id, std::move(n));
    }
    if (j.contains("isolated"))
      for (const auto& jn : j["isolated"]) {
        auto n = read_node(jn);
        catalog.emplace(n.concept_id, std::move(n));
      }
    g.corpus_pmids = j.at("corpus").at("pmids").get<std::set<std::string>>();
    for (const auto& je : j.at("edges")) {
      CoEdge e;
      e.disease_id = je.at("disease_id").get<std::string>();
      e.other_id = je.at("other_id").get<std::string>();
      e.pmids = je.at("pmids").get<std::set<std::string>>();
      const auto d = catalog.find(e.disease_id);
      const auto o = catalog.find(e.other_id);
      if (d == catalog.end() || o == catalog.end())
        throw DataError("edge references unknown node: " + e.disease_id + " -- " + e.other_id);
      if (d->second.category != ConceptCategory::Disease)
        throw DataError("edge disease endpoint is not a Disease: " + e.disease_id);
      e.other_category = o->second.category;
      if (e.pmids.empty() || e.pmids.size() != je.at("weight").get<std::size_t>())
        throw DataError("edge weight disagrees with its pmid set: " + e.disease_id + " -- " +
                        e.other_id);
      EdgeKey key{e.disease_id, e.other_id};
      if (canonical_pair(e.disease_id, e.other_id, e.other_category) != key)
        throw DataError("edge not in canonical orientation: " + e.disease_id + " -- " + e.other_id);
      g.edges.emplace(std::move(key), std::move(e));
    }
    g.nodes = std::move(catalog);
    detail::finalize_graph(g);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("graph file: ") + e.what());
  }
  return g;
}

}  // namespace litkg

#endif  // LITKG_GRAPH_HPP
