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

#ifndef LITKG_ANALYTICS_HPP
#define LITKG_ANALYTICS_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "litkg/common.hpp"
#include "litkg/csv.hpp"
#include "litkg/error.hpp"
#include "litkg/graph.hpp"
#include "litkg/pubtator.hpp"

namespace litkg {

struct GraphStats {
  std::size_t abstracts = 0;
  std::map<ConceptCategory, std::size_t> node_counts;     // concepts in the graph
  std::map<ConceptCategory, std::size_t> concept_counts;  // all concepts seen in the corpus
  std::map<RelationClass, std::size_t> relation_counts;   // unique edges per class
  std::size_t edges = 0;
  std::size_t snp_disease_abstracts = 0;  // abstracts supporting a Disease-SNP&Mutation edge

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

/// Graph-only statistics; the graph carries its corpus PMID set.
inline GraphStats stats(const KnowledgeGraph& g) {
  GraphStats s;
  s.abstracts = g.corpus_pmids.size();
  for (auto c : kAllCategories) {
    s.node_counts[c] = 0;
    s.concept_counts[c] = 0;
  }
  for (auto r : kAllRelations) s.relation_counts[r] = 0;
  for (const auto& [id, n] : g.nodes) {
    ++s.node_counts[n.category];
    ++s.concept_counts[n.category];
  }
  for (const auto& [id, n] : g.isolated) ++s.concept_counts[n.category];
  std::set<std::string> snp;
  for (const auto& [key, e] : g.edges) {
    const auto rc = relation_class(e);
    ++s.relation_counts[rc];
    if (rc == RelationClass::DiseaseSnpMutation) snp.insert(e.pmids.begin(), e.pmids.end());
  }
  s.edges = g.edges.size();
  s.snp_disease_abstracts = snp.size();
  return s;
}

/// As stats(g), after checking that `corpus` is the one `g` was built from.
inline GraphStats stats(const KnowledgeGraph& g, const Corpus& corpus) {
  const auto fp = corpus_fingerprint(corpus);
  if (fp != g.fingerprint())
    throw DataError("graph was not built from this corpus (fingerprint " + g.fingerprint() +
                    " vs " + fp + ")");
  return stats(g);
}

struct PairRow {
  std::string disease_id;
  std::string other_id;
  std::string disease_name;
  std::string other_name;
  std::size_t weight = 0;

  friend bool operator==(const PairRow&, const PairRow&) = default;
};

/// The k heaviest edges of one relation class. Ties are ordered by
/// (disease name, other name), then by ids.
inline std::vector<PairRow> top_pairs(const KnowledgeGraph& g, RelationClass relation, std::size_t k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  std::vector<PairRow> rows;
  for (const auto& [key, e] : g.edges) {
    if (relation_class(e) != relation) continue;
    rows.push_back({e.disease_id, e.other_id, g.display_name(e.disease_id),
                    g.display_name(e.other_id), e.weight});
  }
  auto before = [](const PairRow& a, const PairRow& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::tie(a.disease_name, a.other_name, a.disease_id, a.other_id) <
           std::tie(b.disease_name, b.other_name, b.disease_id, b.other_id);
  };
  if (rows.size() > k) {
    std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end(), before);
    rows.resize(k);
  } else {
    std::sort(rows.begin(), rows.end(), before);
  }
  return rows;
}

inline std::vector<PairRow> top_pairs(const KnowledgeGraph& g, std::string_view relation, std::size_t k) {
  const auto rc = relation_from_string(relation);
  if (!rc) {
    std::string known;
    for (auto r : kAllRelations) known += (known.empty() ? "" : ", ") + std::string(to_string(r));
    throw InvalidArgument("unknown relation class '" + std::string(relation) + "' (expected one of " +
                          known + ")");
  }
  return top_pairs(g, *rc, k);
}

enum class Metric { Euclidean, Cosine };

constexpr std::string_view to_string(Metric m) {
  return m == Metric::Euclidean ? "euclidean" : "cosine";
}

inline std::optional<Metric> metric_from_string(std::string_view s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "cosine") return Metric::Cosine;
  return std::nullopt;
}

/// Anything with `ids` and a `row(i)` returning a span of doubles.
template <typename S>
concept VectorSpace = requires(const S& s, std::size_t i) {
  { s.ids } -> std::convertible_to<const std::vector<std::string>&>;
  { s.row(i) } -> std::convertible_to<std::span<const double>>;
};

inline double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (metric == Metric::Euclidean) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 1.0;
  return 1.0 - ab / (std::sqrt(aa) * std::sqrt(bb));
}

struct NeighborEntry {
  std::string concept_id;
  std::string name;
  std::string category;  // empty when the concept is unknown to the graph
  double distance = 0.0;
  bool diet_related = false;

  friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

struct NeighborResult {
  std::string query;
  Metric metric = Metric::Euclidean;
  std::vector<NeighborEntry> neighbors;
};

/// Levenshtein distance on bytes, case folded.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const bool same = std::tolower(static_cast<unsigned char>(a[i - 1])) ==
                        std::tolower(static_cast<unsigned char>(b[j - 1]));
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (same ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Up to `limit` known ids whose id or display name is closest to `query`.
template <VectorSpace S>
std::vector<std::string> suggest_ids(const S& space, std::string_view query,
                                     const KnowledgeGraph* graph, std::size_t limit = 5) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& id : space.ids) {
    std::size_t d = edit_distance(query, id);
    if (graph) d = std::min(d, edit_distance(query, graph->display_name(id)));
    scored.emplace_back(d, id);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) {
    const auto& id = scored[i].second;
    out.push_back(graph ? id + " (" + graph->display_name(id) + ")" : id);
  }
  return out;
}

/// Exact scan for the k nearest vectors to `query`, excluding the query
/// itself. Sorted by distance, ties by concept id.
template <VectorSpace S>
NeighborResult nearest_neighbors(const S& space, const std::string& query, std::size_t k,
                                 Metric metric, const KnowledgeGraph* graph = nullptr) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  std::optional<std::size_t> qi;
  for (std::size_t i = 0; i < space.ids.size(); ++i)
    if (space.ids[i] == query) {
      qi = i;
      break;
    }
  if (!qi) {
    std::string msg = "unknown concept id '" + query + "'";
    const auto near = suggest_ids(space, query, graph);
    if (!near.empty()) {
      msg += "; closest known ids:";
      for (const auto& s : near) msg += " " + s + ";";
      msg.pop_back();
    }
    throw DataError(msg);
  }
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(space.ids.size());
  const auto qrow = space.row(*qi);
  for (std::size_t i = 0; i < space.ids.size(); ++i) {
    if (i == *qi) continue;
    scored.emplace_back(distance(qrow, space.row(i), metric), i);
  }
  auto before = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return space.ids[a.second] < space.ids[b.second];
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    before);
  NeighborResult r{query, metric, {}};
  for (std::size_t i = 0; i < take; ++i) {
    const auto& id = space.ids[scored[i].second];
    NeighborEntry nb{id, id, "", scored[i].first, false};
    if (graph) {
      if (const auto* node = graph->find(id)) {
        nb.name = node->name;
        nb.category = std::string(display_label(node->category));
      }
    }
    r.neighbors.push_back(std::move(nb));
  }
  return r;
}

/// Flags each neighbor whose id is in the lexicon.
inline NeighborResult neighbor_highlight(NeighborResult result, const std::set<std::string>& lexicon) {
  for (auto& n : result.neighbors) n.diet_related = lexicon.contains(n.concept_id);
  return result;
}

/// Lexicon file: one concept id per line; blank lines and '#' comments ignored.
inline std::set<std::string> load_lexicon(const std::string& path) {
  const auto text = read_file(path);
  std::set<std::string> ids;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    ids.insert(line.substr(b, e - b + 1));
  }
  return ids;
}

/// Text table: a header row plus data rows, rendered aligned or as CSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> right_align;  // per column; defaults to left

  std::string render_text() const {
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size() && c < width.size(); ++c)
        width[c] = std::max(width[c], detail::utf8_length(r[c]));
    };
    measure(header);
    for (const auto& r : rows) measure(r);
    auto line = [&](const std::vector<std::string>& r) {
      std::string out;
      for (std::size_t c = 0; c < r.size(); ++c) {
        const std::size_t pad = width[c] - detail::utf8_length(r[c]);
        const bool right = c < right_align.size() && right_align[c];
        if (c) out += "  ";
        if (right) out.append(pad, ' ');
        out += r[c];
        if (!right && c + 1 < r.size()) out.append(pad, ' ');
      }
      return out + "\n";
    };
    std::string out = line(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    out += line(rule);
    for (const auto& r : rows) out += line(r);
    return out;
  }

  std::string render_csv() const {
    std::string out = csv::join_row(header);
    for (const auto& r : rows) out += csv::join_row(r);
    return out;
  }
};

inline Table stats_table(const GraphStats& s) {
  Table t{{"measure", "value"}, {}, {false, true}};
  t.rows.push_back({"abstracts", std::to_string(s.abstracts)});
  for (const auto& [c, n] : s.node_counts)
    t.rows.push_back({"nodes." + std::string(display_label(c)), std::to_string(n)});
  for (const auto& [c, n] : s.concept_counts)
    t.rows.push_back({"concepts." + std::string(display_label(c)), std::to_string(n)});
  for (const auto& [r, n] : s.relation_counts)
    t.rows.push_back({"relations." + std::string(to_string(r)), std::to_string(n)});
  t.rows.push_back({"edges", std::to_string(s.edges)});
  t.rows.push_back({"snp_disease_abstracts", std::to_string(s.snp_disease_abstracts)});
  return t;
}

inline Table pairs_table(const std::vector<PairRow>& rows) {
  Table t{{"rank", "disease_id", "disease_name", "other_id", "other_name", "count"},
          {},
          {true, false, false, false, false, true}};
  for (std::size_t i = 0; i < rows.size(); ++i)
    t.rows.push_back({std::to_string(i + 1), rows[i].disease_id, rows[i].disease_name,
                      rows[i].other_id, rows[i].other_name, std::to_string(rows[i].weight)});
  return t;
}

inline Table neighbors_table(const NeighborResult& r) {
  Table t{{"rank", "concept_id", "name", "category", "distance", "diet_flag"},
          {},
          {true, false, false, false, true, false}};
  for (std::size_t i = 0; i < r.neighbors.size(); ++i) {
    const auto& n = r.neighbors[i];
    t.rows.push_back({std::to_string(i + 1), n.concept_id, n.name, n.category,
                      format_double(n.distance, 6), n.diet_related ? "1" : "0"});
  }
  return t;
}

}  // namespace litkg

#endif  // LITKG_ANALYTICS_HPP
