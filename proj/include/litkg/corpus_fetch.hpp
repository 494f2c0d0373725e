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

#ifndef LITKG_CORPUS_FETCH_HPP
#define LITKG_CORPUS_FETCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "litkg/common.hpp"
#include "litkg/error.hpp"
#include "litkg/pubtator.hpp"

namespace litkg {

struct SearchQuery {
  std::vector<std::string> disease_terms;
  std::vector<std::string> diet_terms;
  std::string rendered;

  // Optional filters, sent alongside the term; never part of `rendered`.
  std::string min_date;  // YYYY or YYYY/MM/DD
  std::string max_date;
  std::vector<std::string> publication_types;

  /// "(d1 OR d2 ...) AND (t1 OR t2 ...)".
  static SearchQuery make(std::vector<std::string> disease, std::vector<std::string> diet) {
    if (disease.empty() || diet.empty()) throw InvalidArgument("both query term lists must be non-empty");
    auto join = [](const std::vector<std::string>& terms) {
      std::string out;
      for (const auto& t : terms) {
        if (t.empty()) throw InvalidArgument("empty query term");
        if (!out.empty()) out += " OR ";
        out += t;
      }
      return out;
    };
    SearchQuery q;
    q.rendered = "(" + join(disease) + ") AND (" + join(diet) + ")";
    q.disease_terms = std::move(disease);
    q.diet_terms = std::move(diet);
    return q;
  }

  /// Term string actually submitted: `rendered`, plus a publication-type
  /// clause when types are set.
  std::string request_term() const {
    if (publication_types.empty()) return rendered;
    std::string pt;
    for (const auto& t : publication_types) {
      if (!pt.empty()) pt += " OR ";
      pt += t + "[pt]";
    }
    return rendered + " AND (" + pt + ")";
  }

  /// Fixture key: FNV-1a of the request term plus any date filter.
  std::string fixture_key() const {
    std::string key = request_term();
    if (!min_date.empty() || !max_date.empty()) key += "|" + min_date + "|" + max_date;
    return hex64(fnv1a64(key));
  }
};

/// Neurodegenerative-disease by diet query used to assemble the corpus.
inline SearchQuery default_query() {
  return SearchQuery::make({"Alzheimer's disease", "Parkinson's disease", "Prion disease",
                            "Huntington disease", "neurodegenerative disease"},
                           {"eat", "diet", "food"});
}

enum class FetchSource { Live, Fixture };

struct FetchManifest {
  SearchQuery query;
  std::vector<std::string> pmids;
  std::string retrieved_at;  // ISO 8601 UTC
  FetchSource source = FetchSource::Fixture;
};

struct HttpResponse {
  int status = 0;  // 0: transport failure, see `error`
  std::string body;
  std::string error;
  std::optional<double> retry_after_seconds;
};

/// Blocking HTTP GET. Implementations report connection failures through
/// status 0 rather than throwing.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::nanoseconds now() = 0;  // monotonic
  virtual void sleep_for(std::chrono::nanoseconds d) = 0;
  virtual std::string utc_timestamp() = 0;
};

class SystemClock final : public Clock {
 public:
  std::chrono::nanoseconds now() override {
    return std::chrono::steady_clock::now().time_since_epoch();
  }
  void sleep_for(std::chrono::nanoseconds d) override { std::this_thread::sleep_for(d); }
  std::string utc_timestamp() override {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }
};

/// Spaces request start times at least 1/rate apart. Safe to share across
/// threads and clients; callers block inside acquire().
class RateLimiter {
 public:
  RateLimiter(double requests_per_second, Clock& clock) : clock_(&clock) {
    if (!(requests_per_second > 0.0)) throw InvalidArgument("rate must be > 0");
    interval_ = std::chrono::nanoseconds(static_cast<std::int64_t>(std::ceil(1e9 / requests_per_second)));
  }

  void acquire() {
    std::lock_guard lock(mutex_);
    const auto now = clock_->now();
    if (started_ && now < next_) {
      clock_->sleep_for(next_ - now);
      next_ += interval_;
    } else {
      next_ = now + interval_;
    }
    started_ = true;
  }

  std::chrono::nanoseconds interval() const { return interval_; }

 private:
  Clock* clock_;
  std::chrono::nanoseconds interval_{};
  std::chrono::nanoseconds next_{};
  bool started_ = false;
  std::mutex mutex_;
};

struct FetchConfig {
  std::string search_base = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";
  std::string annotation_base = "https://www.ncbi.nlm.nih.gov/research/pubtator3-api";
  std::string api_key;
  double requests_per_second = 3.0;
  std::size_t page_size = 200;
  std::size_t annotation_batch = 100;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::optional<std::filesystem::path> fixture_dir;  // set: offline, no transport use

  /// Applies LITKG_API_BASE and LITKG_API_KEY when present.
  void apply_environment() {
    if (const char* base = std::getenv("LITKG_API_BASE"); base && *base) search_base = base;
    if (const char* key = std::getenv("LITKG_API_KEY"); key && *key) api_key = key;
  }
};

struct AnnotationStream {
  std::string text;                  // PubTator blocks in manifest order
  std::vector<std::string> skipped;  // PMIDs the service had no record for
};

inline std::string url_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

namespace detail {

inline std::vector<std::string> parse_search_ids(std::string_view body, std::optional<std::size_t>* total) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("body", e.what());
  }
  if (!j.is_object() || !j.contains("esearchresult") || !j["esearchresult"].is_object())
    throw ParseError("esearchresult", "missing or not an object");
  const auto& r = j["esearchresult"];
  if (!r.contains("idlist") || !r["idlist"].is_array())
    throw ParseError("esearchresult.idlist", "missing or not an array");
  std::vector<std::string> ids;
  for (const auto& id : r["idlist"]) {
    std::string s = id.is_string() ? id.get<std::string>() : id.is_number_unsigned() ? id.dump() : "";
    if (!is_decimal(s)) throw ParseError("esearchresult.idlist", "non-numeric PMID " + id.dump());
    ids.push_back(std::move(s));
  }
  if (total) {
    total->reset();
    if (r.contains("count")) {
      const auto& c = r["count"];
      std::int64_t n = 0;
      if (c.is_string() && parse_int(c.get<std::string>(), n) && n >= 0)
        *total = static_cast<std::size_t>(n);
      else if (c.is_number_unsigned())
        *total = c.get<std::size_t>();
      else
        throw ParseError("esearchresult.count", "not a non-negative integer");
    }
  }
  return ids;
}

/// Splits PubTator text into blocks keyed by the PMID on their first line.
inline std::map<std::string, std::string> blocks_by_pmid(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string current, pmid;
  auto flush = [&] {
    if (!current.empty() && !pmid.empty()) out.emplace(pmid, current);
    current.clear();
    pmid.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      continue;
    }
    if (current.empty()) {
      const auto cut = line.find_first_of("|\t");
      pmid = std::string(line.substr(0, cut));
    }
    current += line;
    current += '\n';
  }
  flush();
  return out;
}

}  // namespace detail

/// Retrieval session against the search and annotation services, or
/// against a fixture directory when FetchConfig::fixture_dir is set.
class RetrievalClient {
 public:
  RetrievalClient(FetchConfig config, Transport& transport, Clock& clock, RateLimiter& limiter)
      : config_(std::move(config)), transport_(&transport), clock_(&clock), limiter_(&limiter) {}

  const FetchConfig& config() const { return config_; }

  FetchManifest search(const SearchQuery& query, std::size_t limit) {
    if (limit == 0) throw InvalidArgument("limit must be > 0");
    FetchManifest m;
    m.query = query;
    std::set<std::string> seen;
    auto take = [&](const std::vector<std::string>& ids) {
      for (const auto& id : ids) {
        if (m.pmids.size() >= limit) break;
        if (seen.insert(id).second) m.pmids.push_back(id);
      }
    };
    if (config_.fixture_dir) {
      m.source = FetchSource::Fixture;
      const auto path = *config_.fixture_dir / "search" / (query.fixture_key() + ".json");
      const auto body = read_file(path.string());
      take(detail::parse_search_ids(body, nullptr));
      m.retrieved_at = "1970-01-01T00:00:00Z";
      try {
        const auto j = nlohmann::json::parse(body);
        if (j.contains("retrieved_at") && j["retrieved_at"].is_string())
          m.retrieved_at = j["retrieved_at"].get<std::string>();
      } catch (const nlohmann::json::exception&) {
      }
      return m;
    }
    m.source = FetchSource::Live;
    m.retrieved_at = clock_->utc_timestamp();
    std::size_t start = 0;
    for (;;) {
      const std::size_t want = std::min(config_.page_size, limit - m.pmids.size());
      std::string url = config_.search_base + "/esearch.fcgi?db=pubmed&retmode=json&term=" +
                        url_encode(query.request_term()) + "&retstart=" + std::to_string(start) +
                        "&retmax=" + std::to_string(want);
      if (!query.min_date.empty() || !query.max_date.empty())
        url += "&datetype=pdat&mindate=" + url_encode(query.min_date.empty() ? "1800" : query.min_date) +
               "&maxdate=" + url_encode(query.max_date.empty() ? "3000" : query.max_date);
      if (!config_.api_key.empty()) url += "&api_key=" + url_encode(config_.api_key);
      std::optional<std::size_t> total;
      const auto ids = detail::parse_search_ids(get(url).body, &total);
      take(ids);
      start += ids.size();
      if (ids.empty() || m.pmids.size() >= limit || (total && start >= *total)) break;
    }
    return m;
  }

  AnnotationStream fetch(const FetchManifest& manifest) {
    if (manifest.pmids.empty()) throw InvalidArgument("manifest has no PMIDs");
    std::map<std::string, std::string> blocks;
    if (config_.fixture_dir) {
      for (const auto& pmid : manifest.pmids) {
        const auto path = *config_.fixture_dir / "annotations" / (pmid + ".txt");
        if (!std::filesystem::exists(path)) continue;
        auto found = detail::blocks_by_pmid(read_file(path.string()));
        if (auto it = found.find(pmid); it != found.end()) blocks.emplace(pmid, std::move(it->second));
      }
    } else {
      const std::size_t batch = std::max<std::size_t>(1, config_.annotation_batch);
      for (std::size_t i = 0; i < manifest.pmids.size(); i += batch) {
        std::string ids;
        for (std::size_t k = i; k < std::min(manifest.pmids.size(), i + batch); ++k) {
          if (!ids.empty()) ids += ',';
          ids += manifest.pmids[k];
        }
        const auto body = get(config_.annotation_base + "/publications/export/pubtator?pmids=" + ids).body;
        blocks.merge(detail::blocks_by_pmid(body));
      }
    }
    AnnotationStream out;
    for (const auto& pmid : manifest.pmids) {
      auto it = blocks.find(pmid);
      if (it == blocks.end()) {
        out.skipped.push_back(pmid);
        continue;
      }
      if (!out.text.empty()) out.text += '\n';
      out.text += it->second;
    }
    return out;
  }

 private:
  /// GET with rate limiting and retry. Retries transport failures, 429 and
  /// 5xx with exponential backoff; other statuses fail at once.
  HttpResponse get(const std::string& url) {
    std::string last_error;
    bool rate_limited = false;
    const int attempts = 1 + std::max(0, config_.max_retries);
    for (int attempt = 1; attempt <= attempts; ++attempt) {
      limiter_->acquire();
      auto resp = transport_->get(url);
      if (resp.status >= 200 && resp.status < 300) return resp;
      rate_limited = resp.status == 429;
      const bool retryable = resp.status == 0 || resp.status == 429 || resp.status >= 500;
      last_error = resp.status == 0 ? "transport failure: " + resp.error
                                    : "HTTP " + std::to_string(resp.status);
      if (!retryable) throw NetworkError(last_error + " for " + url, attempt);
      if (attempt == attempts) break;
      auto backoff = std::chrono::duration_cast<std::chrono::nanoseconds>(config_.initial_backoff) *
                     (std::int64_t{1} << (attempt - 1));
      if (resp.retry_after_seconds)
        backoff = std::max(backoff, std::chrono::nanoseconds(
                                        static_cast<std::int64_t>(*resp.retry_after_seconds * 1e9)));
      clock_->sleep_for(backoff);
    }
    throw NetworkError((rate_limited ? "rate limited: " : "") + last_error + " for " + url, attempts,
                       rate_limited);
  }

  FetchConfig config_;
  Transport* transport_;
  Clock* clock_;
  RateLimiter* limiter_;
};

inline FetchManifest search_pmids(const SearchQuery& query, std::size_t limit, RetrievalClient& client) {
  return client.search(query, limit);
}

inline AnnotationStream fetch_annotations(const FetchManifest& manifest, RetrievalClient& client) {
  return client.fetch(manifest);
}

inline std::string write_manifest_json(const FetchManifest& m, const Provenance& prov = {}) {
  using ordered = nlohmann::ordered_json;
  ordered q{{"disease_terms", m.query.disease_terms},
            {"diet_terms", m.query.diet_terms},
            {"rendered", m.query.rendered}};
  if (!m.query.min_date.empty()) q["min_date"] = m.query.min_date;
  if (!m.query.max_date.empty()) q["max_date"] = m.query.max_date;
  if (!m.query.publication_types.empty()) q["publication_types"] = m.query.publication_types;
  ordered j{{"provenance", prov.fields},
            {"query", q},
            {"pmids", m.pmids},
            {"retrieved_at", m.retrieved_at},
            {"source", m.source == FetchSource::Live ? "live" : "fixture"}};
  return j.dump(1) + "\n";
}

inline FetchManifest read_manifest_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& q = j.at("query");
    FetchManifest m;
    m.query = SearchQuery::make(q.at("disease_terms").get<std::vector<std::string>>(),
                                q.at("diet_terms").get<std::vector<std::string>>());
    m.query.min_date = q.value("min_date", "");
    m.query.max_date = q.value("max_date", "");
    m.query.publication_types = q.value("publication_types", std::vector<std::string>{});
    m.pmids = j.at("pmids").get<std::vector<std::string>>();
    std::set<std::string> seen;
    for (const auto& p : m.pmids)
      if (!detail::is_decimal(p) || !seen.insert(p).second)
        throw DataError("manifest: invalid or duplicate PMID '" + p + "'");
    m.retrieved_at = j.at("retrieved_at").get<std::string>();
    m.source = j.at("source").get<std::string>() == "live" ? FetchSource::Live : FetchSource::Fixture;
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
}

}  // namespace litkg

#endif  // LITKG_CORPUS_FETCH_HPP
