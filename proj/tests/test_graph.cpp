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

#include "litkg/graph.hpp"
#include "oracles.hpp"

namespace {

using litkg::ConceptCategory;

litkg::AbstractDoc doc(const std::string& pmid,
                       std::vector<std::tuple<std::string, ConceptCategory, std::string>> concepts) {
  litkg::AbstractDoc d;
  d.pmid = pmid;
  d.title = "t";
  for (auto& [id, cat, surface] : concepts) {
    litkg::EntityMention m;
    m.pmid = pmid;
    m.start = 0;
    m.end = 1;
    m.surface = surface;
    m.category = cat;
    m.concept_id = id;
    m.raw_type = std::string(litkg::to_string(cat));
    d.mentions.push_back(m);
  }
  return d;
}

litkg::Corpus corpus_of(std::vector<litkg::AbstractDoc> docs) {
  litkg::Corpus c;
  c.docs = std::move(docs);
  return c;
}

void expect_invariants(const litkg::KnowledgeGraph& g) {
  std::size_t degree_sum = 0;
  for (const auto& [id, list] : g.adjacency) {
    degree_sum += list.size();
    for (const auto& nb : list) {
      const auto& back = g.adjacency.at(nb.id);
      const auto it = std::find_if(back.begin(), back.end(), [&](const auto& x) { return x.id == id; });
      ASSERT_NE(it, back.end());
      EXPECT_EQ(it->weight, nb.weight);
    }
  }
  EXPECT_EQ(degree_sum, 2 * g.edges.size());
  for (const auto& [key, e] : g.edges) {
    EXPECT_EQ(e.weight, e.pmids.size());
    EXPECT_GE(e.weight, 1u);
    EXPECT_NE(e.disease_id, e.other_id);
    ASSERT_TRUE(g.nodes.contains(e.disease_id));
    ASSERT_TRUE(g.nodes.contains(e.other_id));
    EXPECT_EQ(g.nodes.at(e.disease_id).category, ConceptCategory::Disease);
    if (e.other_category == ConceptCategory::Disease) {
      EXPECT_LT(e.disease_id, e.other_id);
    }
  }
  for (const auto& [id, n] : g.nodes) EXPECT_GE(n.doc_frequency, 1u);
}

TEST(BuildGraph, DiseaseCentricLinking) {
  const auto g = litkg::build_graph(corpus_of({doc("1", {{"D", ConceptCategory::Disease, "d"},
                                                         {"C1", ConceptCategory::Chemical, "c1"},
                                                         {"C2", ConceptCategory::Chemical, "c2"}})}));
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges.at({"D", "C1"}).weight, 1u);
  EXPECT_EQ(g.edges.at({"D", "C2"}).weight, 1u);
  EXPECT_FALSE(g.edges.contains({"C1", "C2"}));
  expect_invariants(g);
}

TEST(BuildGraph, DiseasePairCanonical) {
  const auto g = litkg::build_graph(
      corpus_of({doc("1", {{"Dz", ConceptCategory::Disease, "z"}, {"Da", ConceptCategory::Disease, "a"}})}));
  ASSERT_EQ(g.edges.size(), 1u);
  const auto& e = g.edges.begin()->second;
  EXPECT_EQ(e.disease_id, "Da");
  EXPECT_EQ(e.other_id, "Dz");
  EXPECT_EQ(e.weight, 1u);
  EXPECT_EQ(litkg::relation_class(e), litkg::RelationClass::DiseaseDisease);
}

TEST(BuildGraph, RepeatedMentionsCountOncePerAbstract) {
  const auto g = litkg::build_graph(corpus_of(
      {doc("1", {{"D", ConceptCategory::Disease, "AD"}, {"D", ConceptCategory::Disease, "Alzheimer"},
                 {"G", ConceptCategory::Gene, "tau"}, {"G", ConceptCategory::Gene, "tau"}}),
       doc("2", {{"D", ConceptCategory::Disease, "AD"}, {"G", ConceptCategory::Gene, "MAPT"}})}));
  EXPECT_EQ(g.edges.at({"D", "G"}).weight, 2u);
  EXPECT_EQ(g.nodes.at("D").doc_frequency, 2u);
  EXPECT_EQ(g.nodes.at("D").name, "AD");
  EXPECT_EQ(g.nodes.at("G").name, "tau");
}

TEST(BuildGraph, NameTiesBreakLexicographically) {
  const auto g = litkg::build_graph(corpus_of({doc("1", {{"D", ConceptCategory::Disease, "beta"},
                                                         {"D", ConceptCategory::Disease, "alpha"},
                                                         {"X", ConceptCategory::Species, "x"}})}));
  EXPECT_EQ(g.nodes.at("D").name, "alpha");
}

TEST(BuildGraph, NoDiseaseMeansNoEdgesAndWarning) {
  const auto g = litkg::build_graph(corpus_of(
      {doc("1", {{"C", ConceptCategory::Chemical, "c"}, {"G", ConceptCategory::Gene, "g"}})}));
  EXPECT_TRUE(g.edges.empty());
  EXPECT_TRUE(g.nodes.empty());
  EXPECT_EQ(g.isolated.size(), 2u);
  EXPECT_FALSE(g.warnings.empty());
}

TEST(BuildGraph, EmptyCorpus) {
  const auto g = litkg::build_graph(litkg::Corpus{});
  EXPECT_TRUE(g.edges.empty());
  EXPECT_TRUE(g.corpus_pmids.empty());
}

TEST(RelationClass, Mapping) {
  litkg::CoEdge e;
  e.other_category = ConceptCategory::Chemical;
  EXPECT_EQ(litkg::relation_class(e), litkg::RelationClass::DiseaseChemical);
  e.other_category = ConceptCategory::Gene;
  EXPECT_EQ(litkg::relation_class(e), litkg::RelationClass::DiseaseGene);
  e.other_category = ConceptCategory::Disease;
  EXPECT_EQ(litkg::relation_class(e), litkg::RelationClass::DiseaseDisease);
  for (auto r : litkg::kAllRelations) EXPECT_EQ(litkg::relation_from_string(litkg::to_string(r)), r);
  EXPECT_EQ(litkg::relation_from_string("chemical-disease"), std::nullopt);
}

TEST(BuildGraph, MatchesBruteForceOracle) {
  oracle::Rng rng(2024);
  const auto corpus = oracle::synthetic_corpus(rng, 1000, 50, 10);
  const auto g = litkg::build_graph(corpus);
  std::string why;
  EXPECT_TRUE(oracle::same_edges(g, oracle::cooccurrence(corpus), &why)) << why;
  expect_invariants(g);
}

TEST(BuildGraph, ThreadsGiveSameGraph) {
  oracle::Rng rng(5);
  const auto corpus = oracle::synthetic_corpus(rng, 700, 40, 8);
  EXPECT_EQ(litkg::build_graph(corpus, 1), litkg::build_graph(corpus, 4));
}

TEST(Merge, IdentityAndUnion) {
  oracle::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::synthetic_corpus(rng, 40, 25, 6, 1000);
    const auto b = oracle::synthetic_corpus(rng, 30, 25, 6, 5000);
    const auto ga = litkg::build_graph(a), gb = litkg::build_graph(b);
    EXPECT_EQ(litkg::merge(ga, litkg::KnowledgeGraph{}), ga);
    EXPECT_EQ(litkg::merge(litkg::KnowledgeGraph{}, ga), ga);
    auto both = a;
    both.docs.insert(both.docs.end(), b.docs.begin(), b.docs.end());
    EXPECT_EQ(litkg::merge(ga, gb), litkg::build_graph(both));
  }
}

TEST(Merge, OverlappingPmidRejected) {
  oracle::Rng rng(1);
  const auto a = litkg::build_graph(oracle::synthetic_corpus(rng, 5, 10, 4, 1000));
  const auto b = litkg::build_graph(oracle::synthetic_corpus(rng, 5, 10, 4, 1004));
  EXPECT_THROW(litkg::merge(a, b), litkg::DataError);
}

TEST(GraphJson, RoundTrip) {
  oracle::Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(rng, 80, 30, 6);
    litkg::Provenance prov;
    prov.set("command", "build");
    const auto text = litkg::write_graph_json(g, prov);
    const auto back = litkg::read_graph_json(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(litkg::write_graph_json(back, prov), text);
  }
}

TEST(GraphJson, RejectsInconsistentWeight) {
  const auto g = litkg::build_graph(
      corpus_of({doc("1", {{"D", ConceptCategory::Disease, "d"}, {"C", ConceptCategory::Chemical, "c"}})}));
  auto text = litkg::write_graph_json(g);
  const auto pos = text.find("\"weight\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 11, "\"weight\": 3");
  EXPECT_THROW(litkg::read_graph_json(text), litkg::DataError);
  EXPECT_THROW(litkg::read_graph_json("{"), litkg::DataError);
}

}  // namespace
