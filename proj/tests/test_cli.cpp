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

#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fstream>

#include "litkg/litkg.hpp"
#include "pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using pipeline::litkg_run;

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "litkg_cli_pipeline";
    run_ = new pipeline::Run(pipeline::run_all(dir_));
  }
  static void TearDownTestSuite() {
    delete run_;
    fs::remove_all(dir_);
  }
  static const std::string& file(const std::string& name) { return run_->files.at(name); }

  static inline fs::path dir_;
  static inline pipeline::Run* run_ = nullptr;
};

TEST_F(Pipeline, EveryStageSucceedsAndWritesItsFiles) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  for (const auto& name : pipeline::kOutputs) EXPECT_TRUE(run_->files.contains(name)) << name;
}

TEST_F(Pipeline, OutputsParse) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  const auto manifest = litkg::read_manifest_json(file("manifest.json"));
  EXPECT_EQ(manifest.pmids.size(), 52u);
  EXPECT_EQ(manifest.source, litkg::FetchSource::Fixture);
  EXPECT_EQ(manifest.retrieved_at, "2021-06-01T00:00:00Z");
  EXPECT_EQ(file("skipped.txt"), "31001370\n31005480\n");
  const auto parsed = litkg::parse_pubtator(file("annotations.pubtator"));
  EXPECT_EQ(parsed.docs.size(), 50u);
  EXPECT_TRUE(parsed.block_errors.empty());
  EXPECT_EQ(parsed.offset_warnings, 0u);
  EXPECT_GT(parsed.ignored_type_counts.at("CellLine"), 0u);
  EXPECT_GT(parsed.dropped_mentions, 0u);
  const auto corpus = litkg::read_corpus_jsonl(file("corpus.jsonl"));
  EXPECT_EQ(corpus.docs.size(), 50u);
  const auto graph = litkg::read_graph_json(file("graph.json"));
  EXPECT_EQ(graph.corpus_pmids.size(), 50u);
  const auto emb = litkg::read_embeddings_tsv(file("embeddings.tsv"));
  EXPECT_EQ(emb.size(), graph.nodes.size());
  const auto layout = litkg::read_layout_csv(file("layout.csv"));
  EXPECT_EQ(layout.ids.size(), graph.nodes.size());
  const auto trace = litkg::csv::parse(file("kl_trace.csv"));
  EXPECT_EQ(trace.size(), 1001u);
  const auto edges = litkg::read_edges_csv(file("edges.csv"));
  EXPECT_EQ(edges.size(), graph.edges.size());
  std::istringstream gm(file("graph.graphml")), svg(file("scatter.svg"));
  boost::property_tree::ptree t1, t2;
  EXPECT_NO_THROW(boost::property_tree::read_xml(gm, t1));
  EXPECT_NO_THROW(boost::property_tree::read_xml(svg, t2));
  const auto nn = litkg::csv::parse(file("nn.csv"));
  ASSERT_EQ(nn.size(), 11u);
  EXPECT_EQ(nn[0], (std::vector<std::string>{"rank", "concept_id", "name", "category", "distance", "diet_flag"}));
  std::size_t walks = 0;
  std::istringstream wl(file("walks.txt"));
  for (std::string line; std::getline(wl, line);) walks += !line.empty() && line[0] != '#';
  EXPECT_EQ(walks, graph.nodes.size() * 10);
}

TEST_F(Pipeline, StatsMatchHandCounts) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  EXPECT_EQ(pipeline::compare_stats(file("stats.csv")), "");
}

TEST_F(Pipeline, EmbeddingHeaderRecordsParameters) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  const auto& e = file("embeddings.tsv");
  const auto header = e.substr(0, e.find('\n'));
  EXPECT_EQ(header.rfind("#dims=100 ", 0), 0u);
  EXPECT_NE(header.find("seed=7"), std::string::npos);
  EXPECT_NE(header.find("walk_length=10"), std::string::npos);
  EXPECT_NE(header.find("tool=litkg/0.1.0"), std::string::npos);
  EXPECT_NE(header.find("input="), std::string::npos);
}

TEST_F(Pipeline, EveryOutputCarriesProvenance) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  for (const auto& name : pipeline::kOutputs) {
    if (name == "skipped.txt") continue;
    EXPECT_NE(file(name).find("litkg/0.1.0"), std::string::npos) << name;
  }
}

TEST_F(Pipeline, TopPairsShape) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  std::istringstream in(file("top_pairs.txt"));
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  // provenance, header, rule, 6 rows
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_NE(lines[1].find("disease_name"), std::string::npos);
  EXPECT_EQ(lines[3].find("1"), lines[3].find_first_not_of(' '));
}

TEST_F(Pipeline, RerunIsByteIdentical) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  const auto again = pipeline::run_all(fs::temp_directory_path() / "litkg_cli_pipeline_rerun");
  ASSERT_TRUE(again.ok()) << again.failures();
  for (const auto& name : pipeline::kOutputs) EXPECT_EQ(again.files.at(name), file(name)) << name;
  fs::remove_all(fs::temp_directory_path() / "litkg_cli_pipeline_rerun");
}

TEST_F(Pipeline, NnByDisplayNameAndLayout) {
  ASSERT_TRUE(run_->ok()) << run_->failures();
  const auto graph = litkg::read_graph_json(file("graph.json"));
  const auto name = graph.display_name("Disease:MESH:D000544");
  const auto by_name = litkg_run({"nn", "--embeddings", (dir_ / "embeddings.tsv").string(), "--graph",
                                  (dir_ / "graph.json").string(), "--query", name, "--k", "3"});
  EXPECT_EQ(by_name.code, 0) << by_name.err;
  EXPECT_NE(by_name.out.find("query=Disease:MESH:D000544"), std::string::npos);
  const auto on_layout = litkg_run({"nn", "--layout", (dir_ / "layout.csv").string(), "--query",
                                    "Disease:MESH:D000544", "--k", "3", "--metric", "cosine"});
  EXPECT_EQ(on_layout.code, 0) << on_layout.err;
  const auto unknown = litkg_run({"nn", "--embeddings", (dir_ / "embeddings.tsv").string(), "--query",
                                  "Disease:MESH:D00054"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("Disease:MESH:D000544"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  const auto r = litkg_run({"stats", "--graph", "g.json", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, MissingSubcommandIsUsageError) {
  EXPECT_EQ(litkg_run({}).code, 1);
  EXPECT_EQ(litkg_run({"frobnicate"}).code, 1);
}

TEST(Cli, MissingInputIsDataErrorWithPath) {
  const auto r = litkg_run({"build", "--corpus", "/nonexistent/corpus.jsonl", "--out", "/tmp/x.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/nonexistent/corpus.jsonl"), std::string::npos);
}

TEST(Cli, BadRelationIsUsageError) {
  const auto dir = fs::temp_directory_path() / "litkg_cli_rel";
  fs::create_directories(dir);
  const auto corpus = (dir / "c.jsonl").string(), graph = (dir / "g.json").string();
  ASSERT_EQ(litkg_run({"ingest", "--in", (pipeline::kFixture / "corpus.pubtator").string(), "--out", corpus}).code, 0);
  ASSERT_EQ(litkg_run({"build", "--corpus", corpus, "--out", graph}).code, 0);
  EXPECT_EQ(litkg_run({"top-pairs", "--graph", graph, "--relation", "chemical-gene"}).code, 1);
  EXPECT_EQ(litkg_run({"top-pairs", "--graph", graph, "--relation", "disease-gene", "--k", "0"}).code, 1);
  const auto ok = litkg_run({"top-pairs", "--graph", graph, "--relation", "disease-gene", "--k", "3", "--format", "csv"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(litkg::csv::parse(ok.out).size(), 4u);
  fs::remove_all(dir);
}

TEST(Cli, NetworkFailureExitCode) {
  // No live transport is wired in tests, so a live fetch fails after retries.
  class Refuse final : public litkg::Transport {
   public:
    litkg::HttpResponse get(const std::string&) override { return {0, "", "refused", std::nullopt}; }
  };
  class Instant final : public litkg::Clock {
   public:
    std::chrono::nanoseconds now() override { return t; }
    void sleep_for(std::chrono::nanoseconds d) override { t += d; }
    std::string utc_timestamp() override { return "2026-01-01T00:00:00Z"; }
    std::chrono::nanoseconds t{0};
  };
  Refuse transport;
  Instant clock;
  std::ostringstream out, err;
  litkg::cli::Environment env;
  env.out = &out;
  env.err = &err;
  env.transport = &transport;
  env.clock = &clock;
  const auto code = litkg::cli::run({"fetch", "--manifest-out", "/tmp/litkg_m.json", "--out", "/tmp/litkg_a.txt"}, env);
  EXPECT_EQ(code, 3);
  EXPECT_NE(err.str().find("4 attempts"), std::string::npos);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  const auto dir = fs::temp_directory_path() / "litkg_cli_config";
  fs::create_directories(dir);
  const auto corpus = (dir / "c.jsonl").string(), graph = (dir / "g.json").string();
  ASSERT_EQ(litkg_run({"ingest", "--in", (pipeline::kFixture / "corpus.pubtator").string(), "--out", corpus}).code, 0);
  std::ofstream(dir / "run.toml") << "[build]\ncorpus = \"" << corpus << "\"\nout = \"" << graph << "\"\n";
  const auto r = litkg_run({"--config", (dir / "run.toml").string(), "build"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(graph));
  fs::remove_all(dir);
}

TEST(Cli, StatsTextToStdout) {
  const auto dir = fs::temp_directory_path() / "litkg_cli_stats";
  fs::create_directories(dir);
  const auto corpus = (dir / "c.jsonl").string(), graph = (dir / "g.json").string();
  ASSERT_EQ(litkg_run({"ingest", "--in", (pipeline::kFixture / "corpus.pubtator").string(), "--out", corpus}).code, 0);
  ASSERT_EQ(litkg_run({"build", "--corpus", corpus, "--out", graph}).code, 0);
  const auto r = litkg_run({"stats", "--graph", graph});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("nodes.SNP&Mutation"), std::string::npos);
  EXPECT_NE(r.out.find("abstracts"), std::string::npos);
  fs::remove_all(dir);
}

}  // namespace
