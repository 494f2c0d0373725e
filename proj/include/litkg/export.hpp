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

#ifndef LITKG_EXPORT_HPP
#define LITKG_EXPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "litkg/common.hpp"
#include "litkg/csv.hpp"
#include "litkg/error.hpp"
#include "litkg/graph.hpp"
#include "litkg/tsne.hpp"

namespace litkg {

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        // XML 1.0 forbids most C0 controls.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r')
          out += ' ';
        else
          out += c;
    }
  }
  return out;
}

inline std::string xml_comment(const Provenance& prov) {
  std::string text = prov.render();
  for (std::size_t pos; (pos = text.find("--")) != std::string::npos;) text.replace(pos, 2, "- -");
  return "<!-- " + text + " -->\n";
}

inline std::string join_pmids(const std::set<std::string>& pmids) {
  std::string out;
  for (const auto& p : pmids) {
    if (!out.empty()) out += '|';
    out += p;
  }
  return out;
}

inline std::set<std::string> split_pmids(std::string_view s) {
  std::set<std::string> out;
  if (s.empty()) return out;
  for (auto part : split(s, '|')) out.emplace(part);
  return out;
}

}  // namespace detail

/// GraphML 1.0, undirected. Node data: name, category, doc_frequency.
/// Edge data: weight, relation_class, pmids joined by '|'.
inline std::string to_graphml(const KnowledgeGraph& g, const Provenance& prov = {}) {
  using detail::xml_escape;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += detail::xml_comment(prov);
  out +=
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
      "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
      "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
      "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  out += "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n";
  out += "  <key id=\"category\" for=\"node\" attr.name=\"category\" attr.type=\"string\"/>\n";
  out += "  <key id=\"doc_frequency\" for=\"node\" attr.name=\"doc_frequency\" attr.type=\"int\"/>\n";
  out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n";
  out += "  <key id=\"relation_class\" for=\"edge\" attr.name=\"relation_class\" attr.type=\"string\"/>\n";
  out += "  <key id=\"pmids\" for=\"edge\" attr.name=\"pmids\" attr.type=\"string\"/>\n";
  out += "  <graph id=\"litkg\" edgedefault=\"undirected\">\n";
  for (const auto& [id, n] : g.nodes) {
    out += "    <node id=\"" + xml_escape(id) + "\">";
    out += "<data key=\"name\">" + xml_escape(n.name) + "</data>";
    out += "<data key=\"category\">" + std::string(to_string(n.category)) + "</data>";
    out += "<data key=\"doc_frequency\">" + std::to_string(n.doc_frequency) + "</data>";
    out += "</node>\n";
  }
  std::size_t k = 0;
  for (const auto& [key, e] : g.edges) {
    out += "    <edge id=\"e" + std::to_string(k++) + "\" source=\"" + xml_escape(e.disease_id) +
           "\" target=\"" + xml_escape(e.other_id) + "\">";
    out += "<data key=\"weight\">" + std::to_string(e.weight) + "</data>";
    out += "<data key=\"relation_class\">" + std::string(to_string(relation_class(e))) + "</data>";
    out += "<data key=\"pmids\">" + xml_escape(detail::join_pmids(e.pmids)) + "</data>";
    out += "</edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

/// Single-quoted Cypher string literal.
inline std::string cypher_string(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "'";
}

/// cypher-shell script of MERGE statements, one per node and one per
/// relationship, grouped into :begin/:commit transactions of batch_size
/// statements. Re-running it leaves the database unchanged.
inline std::string to_cypher(const KnowledgeGraph& g, std::size_t batch_size = 500,
                             const Provenance& prov = {}) {
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  std::vector<std::string> statements;
  statements.reserve(g.nodes.size() + g.edges.size());
  for (const auto& [id, n] : g.nodes) {
    statements.push_back("MERGE (n:Concept {id: " + cypher_string(id) + "}) SET n:" +
                         std::string(to_string(n.category)) + ", n.name = " + cypher_string(n.name) +
                         ", n.category = " + cypher_string(to_string(n.category)) +
                         ", n.doc_frequency = " + std::to_string(n.doc_frequency) + ";");
  }
  for (const auto& [key, e] : g.edges) {
    std::string pmids = "[";
    for (const auto& p : e.pmids) {
      if (pmids.size() > 1) pmids += ", ";
      pmids += cypher_string(p);
    }
    pmids += "]";
    statements.push_back("MATCH (a:Concept {id: " + cypher_string(e.disease_id) +
                         "}), (b:Concept {id: " + cypher_string(e.other_id) +
                         "}) MERGE (a)-[r:CO_OCCURS]->(b) SET r.weight = " + std::to_string(e.weight) +
                         ", r.relation = " + cypher_string(to_string(relation_class(e))) +
                         ", r.pmids = " + pmids + ";");
  }
  std::string out = "// " + prov.render() + "\n";
  for (std::size_t i = 0; i < statements.size(); ++i) {
    if (i % batch_size == 0) out += ":begin\n";
    out += statements[i] + "\n";
    if (i % batch_size == batch_size - 1 || i + 1 == statements.size()) out += ":commit\n";
  }
  return out;
}

/// Fill colors keyed by category, plus one for concepts missing from the graph.
inline std::string_view category_color(std::optional<ConceptCategory> c) {
  if (!c) return "#7f7f7f";
  switch (*c) {
    case ConceptCategory::Disease: return "#d62728";
    case ConceptCategory::Chemical: return "#1f77b4";
    case ConceptCategory::Gene: return "#2ca02c";
    case ConceptCategory::Species: return "#ff7f0e";
    case ConceptCategory::SnpMutation: return "#9467bd";
  }
  return "#7f7f7f";
}

struct ViewportMap {
  double scale = 1.0;
  double mid_x = 0.0, mid_y = 0.0;
  double size = 1000.0;

  double x(double v) const { return size / 2 + (v - mid_x) * scale; }
  double y(double v) const { return size / 2 - (v - mid_y) * scale; }
};

/// Affine map of the layout's bounding box into a size x size square with
/// `margin` on each side, one scale for both axes.
inline ViewportMap fit_viewport(const ScatterLayout& layout, double size = 1000.0, double margin = 40.0) {
  ViewportMap m;
  m.size = size;
  if (layout.y.rows == 0) return m;
  double x0 = layout.y(0, 0), x1 = x0, y0 = layout.y(0, 1), y1 = y0;
  for (std::size_t i = 0; i < layout.y.rows; ++i) {
    x0 = std::min(x0, layout.y(i, 0));
    x1 = std::max(x1, layout.y(i, 0));
    y0 = std::min(y0, layout.y(i, 1));
    y1 = std::max(y1, layout.y(i, 1));
  }
  m.mid_x = 0.5 * (x0 + x1);
  m.mid_y = 0.5 * (y0 + y1);
  const double span = std::max(x1 - x0, y1 - y0);
  m.scale = span > 0.0 ? (size - 2 * margin) / span : 1.0;
  return m;
}

/// SVG 1.1 scatter: one circle per concept colored by category, in a
/// 1000 x 1000 viewBox, with a category legend.
inline std::string to_scatter_svg(const ScatterLayout& layout, const KnowledgeGraph* g = nullptr,
                                  const Provenance& prov = {}) {
  for (double v : layout.y.data)
    if (!std::isfinite(v)) throw InvalidArgument("layout has non-finite coordinates");
  const auto vp = fit_viewport(layout);
  std::vector<std::size_t> order(layout.ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return layout.ids[a] < layout.ids[b]; });

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += detail::xml_comment(prov);
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
      "viewBox=\"0 0 1000 1000\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n";
  out += "  <g id=\"points\" stroke=\"none\" fill-opacity=\"0.8\">\n";
  char buf[64];
  for (auto i : order) {
    const auto& id = layout.ids[i];
    const ConceptNode* node = g ? g->find(id) : nullptr;
    const auto color = category_color(node ? std::optional(node->category) : std::nullopt);
    std::snprintf(buf, sizeof buf, "cx=\"%.3f\" cy=\"%.3f\"", vp.x(layout.y(i, 0)), vp.y(layout.y(i, 1)));
    out += "    <circle " + std::string(buf) + " r=\"4\" fill=\"" + std::string(color) + "\"><title>" +
           detail::xml_escape(node ? node->name : id) + "</title></circle>\n";
  }
  out += "  </g>\n  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"14\">\n";
  double y = 20;
  for (auto c : kAllCategories) {
    std::snprintf(buf, sizeof buf, "%.0f", y);
    out += "    <circle cx=\"16\" cy=\"" + std::string(buf) + "\" r=\"5\" fill=\"" +
           std::string(category_color(c)) + "\"/>";
    std::snprintf(buf, sizeof buf, "%.0f", y + 5);
    out += "<text x=\"28\" y=\"" + std::string(buf) + "\">" + detail::xml_escape(display_label(c)) +
           "</text>\n";
    y += 20;
  }
  out += "  </g>\n</svg>\n";
  return out;
}

struct EdgeRow {
  std::string disease_id;
  std::string other_id;
  std::string relation;
  std::size_t weight = 0;
  std::set<std::string> pmids;

  friend auto operator<=>(const EdgeRow&, const EdgeRow&) = default;
};

/// CSV with header disease_id,other_id,relation,weight,pmids; rows in
/// canonical edge order; pmids joined by '|'.
inline std::string export_edges_csv(const KnowledgeGraph& g, const Provenance& prov = {}) {
  std::string out = "# " + prov.render() + "\r\n";
  out += csv::join_row({"disease_id", "other_id", "relation", "weight", "pmids"});
  for (const auto& [key, e] : g.edges)
    out += csv::join_row({e.disease_id, e.other_id, std::string(to_string(relation_class(e))),
                          std::to_string(e.weight), detail::join_pmids(e.pmids)});
  return out;
}

inline std::vector<EdgeRow> read_edges_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows[0] != std::vector<std::string>{"disease_id", "other_id", "relation", "weight", "pmids"})
    throw DataError("edges CSV: missing or unexpected header");
  std::vector<EdgeRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 5) throw DataError("edges CSV row " + std::to_string(i) + ": expected 5 fields");
    std::int64_t w = 0;
    if (!detail::parse_int(r[3], w) || w < 1)
      throw DataError("edges CSV row " + std::to_string(i) + ": bad weight");
    out.push_back({r[0], r[1], r[2], static_cast<std::size_t>(w), detail::split_pmids(r[4])});
  }
  return out;
}

/// Layout CSV: concept_id,x,y,category,name sorted by concept_id.
inline std::string write_layout_csv(const ScatterLayout& layout, const KnowledgeGraph* g = nullptr,
                                    const Provenance& prov = {}) {
  std::vector<std::size_t> order(layout.ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return layout.ids[a] < layout.ids[b]; });
  std::string out = "# " + prov.render() + "\r\n";
  out += csv::join_row({"concept_id", "x", "y", "category", "name"});
  for (auto i : order) {
    const auto& id = layout.ids[i];
    const ConceptNode* node = g ? g->find(id) : nullptr;
    out += csv::join_row({id, format_double(layout.y(i, 0)), format_double(layout.y(i, 1)),
                          node ? std::string(to_string(node->category)) : "",
                          node ? node->name : id});
  }
  return out;
}

inline ScatterLayout read_layout_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows[0].size() < 3 || rows[0][0] != "concept_id" || rows[0][1] != "x" ||
      rows[0][2] != "y")
    throw DataError("layout CSV: missing concept_id,x,y header");
  ScatterLayout layout;
  layout.y = Matrix(rows.size() - 1, 2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() < 3) throw DataError("layout CSV row " + std::to_string(i) + ": too few fields");
    layout.ids.push_back(r[0]);
    for (int k = 0; k < 2; ++k) {
      char* end = nullptr;
      const double v = std::strtod(r[1 + k].c_str(), &end);
      if (r[1 + k].empty() || end != r[1 + k].c_str() + r[1 + k].size() || !std::isfinite(v))
        throw DataError("layout CSV row " + std::to_string(i) + ": bad coordinate");
      layout.y(i - 1, static_cast<std::size_t>(k)) = v;
    }
  }
  return layout;
}

inline std::string write_kl_trace_csv(const ScatterLayout& layout, const Provenance& prov = {}) {
  std::string out = "# " + prov.render() + "\r\n";
  out += csv::join_row({"iter", "kl"});
  for (std::size_t i = 0; i < layout.kl_trace.size(); ++i)
    out += csv::join_row({std::to_string(i + 1), format_double(layout.kl_trace[i])});
  return out;
}

}  // namespace litkg

#endif  // LITKG_EXPORT_HPP
