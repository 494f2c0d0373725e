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

#ifndef LITKG_CLI_HPP
#define LITKG_CLI_HPP

#include <cctype>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "litkg/litkg.hpp"

namespace litkg::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNetwork = 3 };

/// Process-level dependencies, injectable for tests. A null transport
/// means "construct the live HTTP transport on demand".
struct Environment {
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
  Transport* transport = nullptr;
  Clock* clock = nullptr;
  std::function<std::unique_ptr<Transport>()> make_live_transport;
};

namespace detail {

inline std::string input_hash(const std::string& content) { return hex64(fnv1a64(content)); }

inline void emit(const Environment& env, const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    *env.out << content;
  else
    write_file(path, content);
}

inline std::string render_table(const Table& t, const std::string& format, const Provenance& prov) {
  if (format == "csv") return "# " + prov.render() + "\r\n" + t.render_csv();
  return "# " + prov.render() + "\n" + t.render_text();
}

/// Accepts a concept id, or a display name matching exactly one graph node
/// (case-insensitive).
template <VectorSpace S>
std::string resolve_query(const S& space, const std::string& query, const KnowledgeGraph* graph) {
  for (const auto& id : space.ids)
    if (id == query) return query;
  if (!graph) return query;
  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  const auto q = lower(query);
  std::vector<std::string> hits;
  for (const auto& [id, n] : graph->nodes)
    if (lower(n.name) == q) hits.push_back(id);
  return hits.size() == 1 ? hits.front() : query;
}

}  // namespace detail

/// Entry point for the `litkg` command. Returns the process exit code:
/// 0 success, 1 usage error, 2 data error, 3 network error.
inline int run(std::vector<std::string> args, Environment env = {}) {
  CLI::App app{"litkg: literature-mining knowledge graph toolkit", "litkg"};
  app.set_config("--config", "", "TOML-style key = value file supplying option values");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Search PubMed and download PubTator annotations");
  std::vector<std::string> disease_terms = default_query().disease_terms;
  std::vector<std::string> diet_terms = default_query().diet_terms;
  std::size_t limit = 10000;
  std::string min_date, max_date, fixtures, manifest_out, annotations_out, skipped_out;
  std::vector<std::string> pub_types;
  std::string search_base, annotation_base, api_key;
  double rate = 3.0;
  std::uint64_t fetch_seed = 0;
  fetch->add_option("--disease-term", disease_terms, "Disease-side query terms")->capture_default_str();
  fetch->add_option("--diet-term", diet_terms, "Diet-side query terms")->capture_default_str();
  fetch->add_option("--limit", limit, "Maximum number of PMIDs")->capture_default_str()->check(CLI::PositiveNumber);
  fetch->add_option("--min-date", min_date, "Publication date lower bound (YYYY[/MM/DD])");
  fetch->add_option("--max-date", max_date, "Publication date upper bound (YYYY[/MM/DD])");
  fetch->add_option("--pub-type", pub_types, "Publication type filter, repeatable");
  fetch->add_option("--fixtures", fixtures, "Offline fixture directory (no network access)");
  fetch->add_option("--manifest-out", manifest_out, "Manifest JSON output")->required();
  fetch->add_option("--out", annotations_out, "PubTator text output")->required();
  fetch->add_option("--skipped-out", skipped_out, "PMIDs without annotations, one per line");
  fetch->add_option("--rate", rate, "Requests per second ceiling")->capture_default_str();
  fetch->add_option("--search-base", search_base, "Search service base URL (env LITKG_API_BASE)");
  fetch->add_option("--annotation-base", annotation_base, "Annotation service base URL");
  fetch->add_option("--api-key", api_key, "Search service API key (env LITKG_API_KEY)");
  fetch->add_option("--seed", fetch_seed, "Accepted for interface uniformity; fetch is not stochastic");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse PubTator text into the canonical corpus file");
  std::vector<std::string> ingest_in;
  std::string corpus_out;
  unsigned threads = 1;
  ingest->add_option("--in", ingest_in, "PubTator input file(s)")->required();
  ingest->add_option("--out", corpus_out, "Corpus JSONL output")->required();
  ingest->add_option("--threads", threads, "Worker threads")->capture_default_str();

  // build
  auto* build = app.add_subcommand("build", "Build the co-occurrence knowledge graph");
  std::string corpus_in, graph_out;
  build->add_option("--corpus", corpus_in, "Corpus JSONL")->required();
  build->add_option("--out", graph_out, "Graph JSON output")->required();
  build->add_option("--threads", threads, "Worker threads")->capture_default_str();

  // embed
  auto* embed = app.add_subcommand("embed", "Random walks + skip-gram node embeddings");
  std::string graph_in, embed_out, walks_out;
  WalkParams walk;
  SgnsParams sgns;
  std::uint64_t seed = 1;
  embed->add_option("--graph", graph_in, "Graph JSON")->required();
  embed->add_option("--out", embed_out, "Embedding TSV output")->required();
  embed->add_option("--walks-out", walks_out, "Optional walk corpus dump");
  embed->add_option("--dims", sgns.dims, "Embedding dimensions")->capture_default_str();
  embed->add_option("--walk-length", walk.walk_length, "Steps per walk")->capture_default_str();
  embed->add_option("--walks-per-node", walk.walks_per_node, "Walks started from each node")->capture_default_str();
  embed->add_option("--p", walk.p, "Return parameter")->capture_default_str();
  embed->add_option("--q", walk.q, "In-out parameter")->capture_default_str();
  embed->add_flag("--eager-tables", walk.eager_second_order, "Precompute all second-order tables");
  embed->add_option("--window", sgns.window, "Skip-gram window")->capture_default_str();
  embed->add_option("--negatives", sgns.negatives, "Negative samples per positive")->capture_default_str();
  embed->add_option("--epochs", sgns.epochs, "Training epochs")->capture_default_str();
  embed->add_option("--lr", sgns.lr0, "Initial learning rate")->capture_default_str();
  embed->add_option("--unigram-power", sgns.unigram_power, "Noise distribution exponent")->capture_default_str();
  embed->add_option("--seed", seed, "Random seed")->capture_default_str();
  embed->add_option("--threads", threads, "Worker threads (1 = deterministic)")->capture_default_str();

  // tsne
  auto* tsne = app.add_subcommand("tsne", "Project embeddings to 2-D with exact t-SNE");
  std::string embeddings_in, layout_out, trace_out, tsne_graph;
  TsneParams tp;
  tsne->add_option("--embeddings", embeddings_in, "Embedding TSV")->required();
  tsne->add_option("--graph", tsne_graph, "Graph JSON (adds category and name columns)");
  tsne->add_option("--out", layout_out, "Layout CSV output")->required();
  tsne->add_option("--trace-out", trace_out, "KL trace CSV output");
  tsne->add_option("--perplexity", tp.perplexity, "Perplexity")->capture_default_str();
  tsne->add_option("--iters", tp.max_iter, "Iterations")->capture_default_str();
  tsne->add_option("--lr", tp.learning_rate, "Learning rate")->capture_default_str();
  tsne->add_option("--seed", seed, "Random seed")->capture_default_str();
  tsne->add_option("--threads", threads, "Worker threads")->capture_default_str();

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Concept and relation counts");
  std::string stats_corpus, format = "text", out_path;
  stats_cmd->add_option("--graph", graph_in, "Graph JSON")->required();
  stats_cmd->add_option("--corpus", stats_corpus, "Corpus JSONL (verified against the graph)");
  stats_cmd->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  stats_cmd->add_option("--out", out_path, "Output file (default stdout)");

  // top-pairs
  auto* top = app.add_subcommand("top-pairs", "Most frequent Disease-concept pairs");
  std::string relation;
  std::size_t k = 10;
  top->add_option("--graph", graph_in, "Graph JSON")->required();
  top->add_option("--relation", relation, "disease-chemical, disease-gene, disease-species, disease-snp-mutation or disease-disease")->required();
  top->add_option("--k", k, "Rows")->capture_default_str();
  top->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  top->add_option("--out", out_path, "Output file (default stdout)");

  // nn
  auto* nn = app.add_subcommand("nn", "Nearest neighbors of a concept");
  std::string nn_layout, query, metric_name = "euclidean", lexicon_path, nn_graph;
  auto* nn_emb = nn->add_option("--embeddings", embeddings_in, "Embedding TSV");
  auto* nn_lay = nn->add_option("--layout", nn_layout, "Query the 2-D layout CSV instead");
  nn_emb->excludes(nn_lay);
  nn->add_option("--graph", nn_graph, "Graph JSON (names and categories)");
  nn->add_option("--query", query, "Concept id or exact display name")->required();
  nn->add_option("--k", k, "Neighbors")->capture_default_str();
  nn->add_option("--metric", metric_name, "euclidean or cosine")->check(CLI::IsMember({"euclidean", "cosine"}))->capture_default_str();
  nn->add_option("--lexicon", lexicon_path, "Diet lexicon: one concept id per line");
  nn->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  nn->add_option("--out", out_path, "Output file (default stdout)");

  // export
  auto* exp = app.add_subcommand("export", "Write GraphML, Cypher, edge CSV or SVG scatter");
  std::string export_format, export_layout;
  std::size_t batch_size = 500;
  exp->add_option("--graph", graph_in, "Graph JSON")->required();
  exp->add_option("--format", export_format, "graphml, cypher, csv or svg")->required()->check(CLI::IsMember({"graphml", "cypher", "csv", "svg"}));
  exp->add_option("--layout", export_layout, "Layout CSV (required for svg)");
  exp->add_option("--batch-size", batch_size, "Cypher statements per transaction")->capture_default_str();
  exp->add_option("--out", out_path, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    *env.out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    *env.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    *env.out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    *env.err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (const auto* sub : app.get_subcommands())
      if (sub->parsed()) failing = sub;
    *env.err << failing->help();
    return kUsage;
  }

  auto& err = *env.err;
  SystemClock system_clock;
  Clock& clock = env.clock ? *env.clock : system_clock;

  try {
    Provenance prov;
    prov.set("command", app.get_subcommands().front()->get_name());

    if (fetch->parsed()) {
      auto q = SearchQuery::make(disease_terms, diet_terms);
      q.min_date = min_date;
      q.max_date = max_date;
      q.publication_types = pub_types;
      FetchConfig cfg;
      cfg.apply_environment();
      if (!search_base.empty()) cfg.search_base = search_base;
      if (!annotation_base.empty()) cfg.annotation_base = annotation_base;
      if (!api_key.empty()) cfg.api_key = api_key;
      cfg.requests_per_second = rate;
      if (!fixtures.empty()) {
        if (!std::filesystem::is_directory(fixtures))
          throw DataError("fixture directory not found: " + fixtures);
        cfg.fixture_dir = fixtures;
      }
      std::unique_ptr<Transport> owned;
      Transport* transport = env.transport;
      if (!transport) {
        if (cfg.fixture_dir || !env.make_live_transport) {
          struct NoNetwork final : Transport {
            HttpResponse get(const std::string&) override {
              return {0, "", "no live transport available", std::nullopt};
            }
          };
          owned = std::make_unique<NoNetwork>();
        } else {
          owned = env.make_live_transport();
        }
        transport = owned.get();
      }
      RateLimiter limiter(cfg.requests_per_second, clock);
      RetrievalClient client(cfg, *transport, clock, limiter);
      const auto manifest = search_pmids(q, limit, client);
      err << "fetch: " << manifest.pmids.size() << " PMIDs ("
          << (manifest.source == FetchSource::Live ? "live" : "fixture") << ")\n";
      prov.set("query", q.request_term()).set("limit", std::to_string(limit));
      write_file(manifest_out, write_manifest_json(manifest, prov));
      if (manifest.pmids.empty()) {
        write_file(annotations_out, "# " + prov.render() + "\n");
        return kOk;
      }
      const auto stream = fetch_annotations(manifest, client);
      write_file(annotations_out, "# " + prov.render() + "\n\n" + stream.text);
      if (!skipped_out.empty()) {
        std::string s;
        for (const auto& p : stream.skipped) s += p + "\n";
        write_file(skipped_out, s);
      }
      err << "fetch: " << stream.skipped.size() << " PMIDs without annotations\n";
      return kOk;
    }

    if (ingest->parsed()) {
      std::string text;
      std::string hashes;
      for (const auto& path : ingest_in) {
        const auto content = read_file(path);
        hashes += (hashes.empty() ? "" : ",") + detail::input_hash(content);
        text += content;
        if (!text.empty() && text.back() != '\n') text += '\n';
        text += '\n';
      }
      const auto corpus = parse_pubtator(text, threads);
      for (const auto& e : corpus.block_errors) err << "ingest: warning: " << e << "\n";
      err << "ingest: " << corpus.docs.size() << " abstracts, " << corpus.dropped_mentions
          << " mentions without id dropped, " << corpus.malformed_mentions << " malformed, "
          << corpus.offset_warnings << " offset warnings\n";
      prov.set("input", hashes);
      write_file(corpus_out, write_corpus_jsonl(corpus, prov));
      return kOk;
    }

    if (build->parsed()) {
      const auto content = read_file(corpus_in);
      const auto corpus = read_corpus_jsonl(content);
      const auto graph = build_graph(corpus, threads);
      for (const auto& w : graph.warnings) err << "build: warning: " << w << "\n";
      err << "build: " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";
      prov.set("input", detail::input_hash(content));
      write_file(graph_out, write_graph_json(graph, prov));
      return kOk;
    }

    if (embed->parsed()) {
      const auto content = read_file(graph_in);
      const auto kg = read_graph_json(content);
      walk.seed = derive_seed(seed, 1);
      walk.threads = threads;
      sgns.seed = seed;
      sgns.threads = threads;
      const auto wg = WalkGraph::from_knowledge_graph(kg);
      if (wg.size() == 0) throw DataError("graph has no nodes to embed: " + graph_in);
      const auto tables = precompute_transitions(wg, walk);
      const auto walks = generate_walks(wg, *tables, walk);
      prov.set("input", detail::input_hash(content))
          .set("walk_length", std::to_string(walk.walk_length))
          .set("walks_per_node", std::to_string(walk.walks_per_node))
          .set("p", format_double(walk.p))
          .set("q", format_double(walk.q))
          .set("window", std::to_string(sgns.window))
          .set("negatives", std::to_string(sgns.negatives))
          .set("epochs", std::to_string(sgns.epochs))
          .set("lr", format_double(sgns.lr0))
          .set("unigram_power", format_double(sgns.unigram_power))
          .set("threads", std::to_string(threads));
      if (!walks_out.empty()) write_file(walks_out, write_walks(walks, Provenance(prov).set("seed", std::to_string(seed))));
      const auto m = train(walks, sgns);
      err << "embed: " << m.size() << " vectors of width " << m.dims << "\n";
      write_file(embed_out, write_embeddings_tsv(m, prov));
      return kOk;
    }

    if (tsne->parsed()) {
      const auto content = read_file(embeddings_in);
      const auto m = read_embeddings_tsv(content);
      std::optional<KnowledgeGraph> kg;
      if (!tsne_graph.empty()) kg = read_graph_json(read_file(tsne_graph));
      Matrix x(m.size(), m.dims);
      x.data = m.input;
      tp.seed = seed;
      tp.threads = threads;
      const auto layout = run_tsne(x, m.ids, tp);
      if (layout.perplexity != tp.perplexity)
        err << "tsne: warning: perplexity reduced to " << layout.perplexity << " for " << m.size() << " points\n";
      if (layout.fallback_rows)
        err << "tsne: warning: " << layout.fallback_rows << " rows used a uniform affinity fallback\n";
      err << "tsne: final KL " << layout.kl << "\n";
      prov.set("input", detail::input_hash(content))
          .set("perplexity", format_double(layout.perplexity))
          .set("iters", std::to_string(tp.max_iter))
          .set("lr", format_double(tp.learning_rate))
          .set("seed", std::to_string(seed));
      write_file(layout_out, write_layout_csv(layout, kg ? &*kg : nullptr, prov));
      if (!trace_out.empty()) write_file(trace_out, write_kl_trace_csv(layout, prov));
      return kOk;
    }

    if (stats_cmd->parsed()) {
      const auto content = read_file(graph_in);
      const auto kg = read_graph_json(content);
      prov.set("input", detail::input_hash(content));
      GraphStats s;
      if (!stats_corpus.empty())
        s = stats(kg, read_corpus_jsonl(read_file(stats_corpus)));
      else
        s = stats(kg);
      detail::emit(env, out_path, detail::render_table(stats_table(s), format, prov));
      return kOk;
    }

    if (top->parsed()) {
      const auto content = read_file(graph_in);
      const auto kg = read_graph_json(content);
      const auto rows = top_pairs(kg, relation, k);
      prov.set("input", detail::input_hash(content)).set("relation", relation).set("k", std::to_string(k));
      detail::emit(env, out_path, detail::render_table(pairs_table(rows), format, prov));
      return kOk;
    }

    if (nn->parsed()) {
      std::optional<KnowledgeGraph> kg;
      if (!nn_graph.empty()) kg = read_graph_json(read_file(nn_graph));
      const KnowledgeGraph* g = kg ? &*kg : nullptr;
      const auto metric = *metric_from_string(metric_name);
      NeighborResult result;
      std::string content;
      if (!nn_layout.empty()) {
        content = read_file(nn_layout);
        const auto layout = read_layout_csv(content);
        result = nearest_neighbors(layout, detail::resolve_query(layout, query, g), k, metric, g);
        prov.set("space", "layout");
      } else if (!embeddings_in.empty()) {
        content = read_file(embeddings_in);
        const auto m = read_embeddings_tsv(content);
        result = nearest_neighbors(m, detail::resolve_query(m, query, g), k, metric, g);
        prov.set("space", "embedding");
      } else {
        throw InvalidArgument("nn needs --embeddings or --layout");
      }
      if (!lexicon_path.empty()) result = neighbor_highlight(std::move(result), load_lexicon(lexicon_path));
      prov.set("input", detail::input_hash(content)).set("query", result.query).set("k", std::to_string(k))
          .set("metric", std::string(to_string(metric)));
      detail::emit(env, out_path, detail::render_table(neighbors_table(result), format, prov));
      return kOk;
    }

    if (exp->parsed()) {
      const auto content = read_file(graph_in);
      const auto kg = read_graph_json(content);
      prov.set("input", detail::input_hash(content)).set("format", export_format);
      std::string text;
      if (export_format == "graphml") {
        text = to_graphml(kg, prov);
      } else if (export_format == "cypher") {
        prov.set("batch_size", std::to_string(batch_size));
        text = to_cypher(kg, batch_size, prov);
      } else if (export_format == "csv") {
        text = export_edges_csv(kg, prov);
      } else {
        if (export_layout.empty()) throw InvalidArgument("--format svg requires --layout");
        const auto layout_text = read_file(export_layout);
        prov.set("layout", hex64(fnv1a64(layout_text)));
        text = to_scatter_svg(read_layout_csv(layout_text), &kg, prov);
      }
      detail::emit(env, out_path, text);
      return kOk;
    }
  } catch (const NetworkError& e) {
    err << "network error: " << e.what() << "\n";
    return kNetwork;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace litkg::cli

#endif  // LITKG_CLI_HPP
