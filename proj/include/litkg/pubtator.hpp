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

#ifndef LITKG_PUBTATOR_HPP
#define LITKG_PUBTATOR_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "litkg/common.hpp"
#include "litkg/error.hpp"
#include "litkg/parallel.hpp"

namespace litkg {

enum class ConceptCategory : std::uint8_t { Disease, Chemical, Gene, Species, SnpMutation };

inline constexpr std::array<ConceptCategory, 5> kAllCategories = {
    ConceptCategory::Disease, ConceptCategory::Chemical, ConceptCategory::Gene,
    ConceptCategory::Species, ConceptCategory::SnpMutation};

/// Identifier used in concept ids and serialized files.
constexpr std::string_view to_string(ConceptCategory c) {
  switch (c) {
    case ConceptCategory::Disease: return "Disease";
    case ConceptCategory::Chemical: return "Chemical";
    case ConceptCategory::Gene: return "Gene";
    case ConceptCategory::Species: return "Species";
    case ConceptCategory::SnpMutation: return "SnpMutation";
  }
  return "?";
}

/// Human-facing label, as printed in reports.
constexpr std::string_view display_label(ConceptCategory c) {
  return c == ConceptCategory::SnpMutation ? std::string_view("SNP&Mutation") : to_string(c);
}

inline std::optional<ConceptCategory> category_from_string(std::string_view s) {
  for (auto c : kAllCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

/// Maps a raw PubTator annotation type onto one of the five concept
/// categories. Types outside the five (CellLine, Chromosome, ...) yield
/// nullopt.
inline std::optional<ConceptCategory> map_category(std::string_view rawtype) {
  if (rawtype == "Disease") return ConceptCategory::Disease;
  if (rawtype == "Chemical") return ConceptCategory::Chemical;
  if (rawtype == "Gene") return ConceptCategory::Gene;
  if (rawtype == "Species") return ConceptCategory::Species;
  if (rawtype == "SNP" || rawtype == "DNAMutation" || rawtype == "ProteinMutation" ||
      rawtype == "Mutation")
    return ConceptCategory::SnpMutation;
  return std::nullopt;
}

/// `<category>:<rawid>`, with the raw id kept verbatim (MESH:D000544 stays
/// MESH:D000544). Returns nullopt for an absent id ("" or "-"), which the
/// caller drops. Unmapped raw types use the raw type itself as prefix.
inline std::optional<std::string> normalize_concept_id(std::string_view rawtype,
                                                       std::string_view rawid) {
  while (!rawid.empty() && (rawid.front() == ' ' || rawid.front() == '\t')) rawid.remove_prefix(1);
  while (!rawid.empty() && (rawid.back() == ' ' || rawid.back() == '\t' || rawid.back() == '\r'))
    rawid.remove_suffix(1);
  if (rawid.empty() || rawid == "-") return std::nullopt;
  const auto cat = map_category(rawtype);
  std::string out(cat ? to_string(*cat) : rawtype);
  out += ':';
  out += rawid;
  return out;
}

struct EntityMention {
  std::string pmid;
  std::int64_t start = 0;  // inclusive, code points into title + " " + body
  std::int64_t end = 0;    // exclusive
  std::string surface;
  ConceptCategory category = ConceptCategory::Disease;
  std::string concept_id;
  std::string raw_type;

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

struct AbstractDoc {
  std::string pmid;
  std::string title;
  std::string body;
  std::vector<EntityMention> mentions;

  friend bool operator==(const AbstractDoc&, const AbstractDoc&) = default;
};

struct Corpus {
  std::vector<AbstractDoc> docs;
  std::size_t dropped_mentions = 0;  // annotation lines without a concept id
  std::map<std::string, std::size_t> ignored_type_counts;
  std::size_t malformed_mentions = 0;  // bad offsets, wrong column count, foreign PMID
  std::size_t offset_warnings = 0;     // offsets outside the text or not matching the surface
  std::size_t relation_lines = 0;      // PMID<TAB>REL<TAB>id<TAB>id lines, not mentions
  std::size_t annotation_lines = 0;
  std::vector<std::string> block_errors;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

namespace detail {

inline std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, out);
  return ec == std::errc() && ptr == last;
}

inline bool is_decimal(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

/// Per-block parse result, merged in input order by parse_pubtator.
struct BlockResult {
  std::optional<AbstractDoc> doc;
  std::size_t dropped = 0;
  std::map<std::string, std::size_t> ignored;
  std::size_t malformed = 0;
  std::size_t offset_warnings = 0;
  std::size_t relation_lines = 0;
  std::size_t annotation_lines = 0;
  std::optional<std::string> error;
};

inline std::optional<std::tuple<std::string_view, char, std::string_view>> text_line(
    std::string_view line) {
  const auto bar = line.find('|');
  if (bar == std::string_view::npos || line.size() < bar + 3 || line[bar + 2] != '|')
    return std::nullopt;
  const auto pmid = line.substr(0, bar);
  if (!is_decimal(pmid)) return std::nullopt;
  return std::tuple{pmid, line[bar + 1], line.substr(bar + 3)};
}

inline BlockResult parse_block(const std::vector<std::string_view>& lines) {
  BlockResult r;
  AbstractDoc doc;
  bool have_title = false;
  std::vector<std::string_view> annotations;
  for (auto line : lines) {
    if (auto tl = text_line(line)) {
      auto [pmid, kind, text] = *tl;
      if (kind == 't') {
        doc.pmid = std::string(pmid);
        doc.title = std::string(text);
        have_title = true;
      } else if (kind == 'a') {
        if (doc.pmid.empty()) doc.pmid = std::string(pmid);
        doc.body = std::string(text);
      }
      continue;
    }
    annotations.push_back(line);
  }
  if (!have_title) {
    r.error = "block" + (doc.pmid.empty() ? std::string() : " for PMID " + doc.pmid) +
              " is missing its title line";
    return r;
  }
  const std::size_t text_len = utf8_length(doc.title) + 1 + utf8_length(doc.body);
  for (auto line : annotations) {
    const auto fields = split(line, '\t');
    std::int64_t start = 0, end = 0;
    if (fields.size() == 4 && !parse_int(fields[1], start)) {
      ++r.relation_lines;
      continue;
    }
    ++r.annotation_lines;
    if (fields.size() < 5 || fields[0] != doc.pmid || !parse_int(fields[1], start) ||
        !parse_int(fields[2], end) || start < 0 || end <= start) {
      ++r.malformed;
      continue;
    }
    const std::string_view rawtype = fields[4];
    const auto cat = map_category(rawtype);
    if (!cat) {
      ++r.ignored[std::string(rawtype)];
      continue;
    }
    const auto id = normalize_concept_id(rawtype, fields.size() > 5 ? fields[5] : std::string_view());
    if (!id) {
      ++r.dropped;
      continue;
    }
    EntityMention m;
    m.pmid = doc.pmid;
    m.start = start;
    m.end = end;
    m.surface = std::string(fields[3]);
    m.category = *cat;
    m.concept_id = *id;
    m.raw_type = std::string(rawtype);
    if (static_cast<std::size_t>(end) > text_len ||
        utf8_length(m.surface) != static_cast<std::size_t>(end - start))
      ++r.offset_warnings;
    doc.mentions.push_back(std::move(m));
  }
  r.doc = std::move(doc);
  return r;
}

}  // namespace detail

/// Parses PubTator plain text. Blocks are separated by blank lines; each
/// block yields one AbstractDoc. Lines starting with '#' are comments.
/// Recoverable problems are tallied on the returned Corpus rather than
/// thrown. Output order follows input order for any `threads` value.
inline Corpus parse_pubtator(std::string_view text, unsigned threads = 1) {
  std::vector<std::vector<std::string_view>> blocks;
  std::vector<std::string_view> current;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
    if (!blank && line.front() == '#') {
      pos = nl + 1;  // comment, e.g. a provenance header
      continue;
    }
    if (blank) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(line);
    }
    pos = nl + 1;
  }
  if (!current.empty()) blocks.push_back(std::move(current));

  std::vector<detail::BlockResult> results(blocks.size());
  parallel_for(blocks.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) results[i] = detail::parse_block(blocks[i]);
  });

  Corpus corpus;
  std::set<std::string> seen;
  for (auto& r : results) {
    corpus.dropped_mentions += r.dropped;
    corpus.malformed_mentions += r.malformed;
    corpus.offset_warnings += r.offset_warnings;
    corpus.relation_lines += r.relation_lines;
    corpus.annotation_lines += r.annotation_lines;
    for (auto& [k, v] : r.ignored) corpus.ignored_type_counts[k] += v;
    if (r.error) {
      corpus.block_errors.push_back(*r.error);
      continue;
    }
    if (!seen.insert(r.doc->pmid).second) {
      corpus.block_errors.push_back("duplicate block for PMID " + r.doc->pmid + " skipped");
      corpus.annotation_lines -= r.annotation_lines;
      corpus.dropped_mentions -= r.dropped;
      corpus.malformed_mentions -= r.malformed;
      corpus.offset_warnings -= r.offset_warnings;
      for (auto& [k, v] : r.ignored)
        if ((corpus.ignored_type_counts[k] -= v) == 0) corpus.ignored_type_counts.erase(k);
      continue;
    }
    corpus.docs.push_back(std::move(*r.doc));
  }
  return corpus;
}

/// Serializes docs back to PubTator text: title and abstract lines, one
/// annotation line per mention, blocks separated by a blank line.
inline std::string write_pubtator(const std::vector<AbstractDoc>& docs) {
  std::string out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    if (i) out += '\n';
    out += d.pmid + "|t|" + d.title + "\n";
    out += d.pmid + "|a|" + d.body + "\n";
    for (const auto& m : d.mentions) {
      const auto colon = m.concept_id.find(':');
      const std::string rawid =
          colon == std::string::npos ? m.concept_id : m.concept_id.substr(colon + 1);
      out += m.pmid + '\t' + std::to_string(m.start) + '\t' + std::to_string(m.end) + '\t' +
             m.surface + '\t' + m.raw_type + '\t' + rawid + '\n';
    }
  }
  return out;
}

/// Order-independent identity of a corpus: hash of its sorted PMID list.
inline std::string corpus_fingerprint(const std::set<std::string>& pmids) {
  std::string joined;
  for (const auto& p : pmids) {
    joined += p;
    joined += '\n';
  }
  return hex64(fnv1a64(joined));
}

inline std::string corpus_fingerprint(const Corpus& corpus) {
  std::set<std::string> pmids;
  for (const auto& d : corpus.docs) pmids.insert(d.pmid);
  return corpus_fingerprint(pmids);
}

// Canonical corpus file: JSON lines. The first line is a header object
// {"litkg_corpus": {...}} carrying provenance and parse tallies; every
// following line is one AbstractDoc with fields in the order pmid, title,
// body, mentions. Mentions are sorted by (start, end, concept_id).

inline std::string write_corpus_jsonl(const Corpus& corpus, const Provenance& prov = {}) {
  using ordered = nlohmann::ordered_json;
  ordered header;
  header["provenance"] = prov.fields;
  header["fingerprint"] = corpus_fingerprint(corpus);
  header["documents"] = corpus.docs.size();
  header["annotation_lines"] = corpus.annotation_lines;
  header["dropped_mentions"] = corpus.dropped_mentions;
  header["ignored_type_counts"] = corpus.ignored_type_counts;
  header["malformed_mentions"] = corpus.malformed_mentions;
  header["offset_warnings"] = corpus.offset_warnings;
  header["relation_lines"] = corpus.relation_lines;
  header["block_errors"] = corpus.block_errors;
  std::string out = ordered{{"litkg_corpus", header}}.dump() + "\n";
  for (const auto& d : corpus.docs) {
    auto mentions = d.mentions;
    std::sort(mentions.begin(), mentions.end(), [](const auto& a, const auto& b) {
      return std::tie(a.start, a.end, a.concept_id) < std::tie(b.start, b.end, b.concept_id);
    });
    ordered j;
    j["pmid"] = d.pmid;
    j["title"] = d.title;
    j["body"] = d.body;
    j["mentions"] = ordered::array();
    for (const auto& m : mentions) {
      j["mentions"].push_back(ordered{{"start", m.start},
                                      {"end", m.end},
                                      {"surface", m.surface},
                                      {"category", to_string(m.category)},
                                      {"concept_id", m.concept_id},
                                      {"raw_type", m.raw_type}});
    }
    out += j.dump() + "\n";
  }
  return out;
}

inline Corpus read_corpus_jsonl(std::string_view text) {
  Corpus corpus;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  std::set<std::string> seen;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (j.contains("litkg_corpus")) {
        const auto& h = j["litkg_corpus"];
        corpus.annotation_lines = h.value("annotation_lines", std::size_t{0});
        corpus.dropped_mentions = h.value("dropped_mentions", std::size_t{0});
        corpus.malformed_mentions = h.value("malformed_mentions", std::size_t{0});
        corpus.offset_warnings = h.value("offset_warnings", std::size_t{0});
        corpus.relation_lines = h.value("relation_lines", std::size_t{0});
        if (h.contains("ignored_type_counts"))
          corpus.ignored_type_counts =
              h["ignored_type_counts"].get<std::map<std::string, std::size_t>>();
        if (h.contains("block_errors"))
          corpus.block_errors = h["block_errors"].get<std::vector<std::string>>();
        continue;
      }
      AbstractDoc d;
      d.pmid = j.at("pmid").get<std::string>();
      d.title = j.at("title").get<std::string>();
      d.body = j.at("body").get<std::string>();
      for (const auto& jm : j.at("mentions")) {
        EntityMention m;
        m.pmid = d.pmid;
        m.start = jm.at("start").get<std::int64_t>();
        m.end = jm.at("end").get<std::int64_t>();
        m.surface = jm.at("surface").get<std::string>();
        const auto cat = category_from_string(jm.at("category").get<std::string>());
        if (!cat) throw DataError("unknown category " + jm.at("category").dump());
        m.category = *cat;
        m.concept_id = jm.at("concept_id").get<std::string>();
        m.raw_type = jm.value("raw_type", std::string(to_string(*cat)));
        if (m.concept_id.empty()) throw DataError("empty concept_id");
        d.mentions.push_back(std::move(m));
      }
      if (!seen.insert(d.pmid).second) throw DataError("duplicate PMID " + d.pmid);
      corpus.docs.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("corpus line " + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace litkg

#endif  // LITKG_PUBTATOR_HPP
