#include <gtest/gtest.h>

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "synthetic_corpus.hpp"
#include "visenrich/error.hpp"
#include "visenrich/pipeline.hpp"

using namespace visenrich;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = VISENRICH_FIXTURE_DIR;
const fs::path kData = VISENRICH_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string serialized(const IndexStore& s) {
  std::ostringstream out;
  write_store(out, s);
  return out.str();
}

IndexStore enriched(const fs::path& corpus, const std::string& taxonomy, const std::string& knowledge = {}) {
  auto store = ingest_corpus(corpus, ExtractionOptions{});
  enrich_store(store, taxonomy, knowledge, PipelineConfig{});
  return store;
}

}  // namespace

TEST(Ingest, PairsFilesAndWarnsOnOrphans) {
  std::vector<std::string> warnings;
  auto store = ingest_corpus(kFixtures / "mini_corpus", ExtractionOptions{}, &warnings);
  ASSERT_EQ(store.records.size(), 3u);
  EXPECT_EQ(store.records[0].doc_id, "d1");
  EXPECT_FALSE(store.header);
  EXPECT_FALSE(store.records[0].enriched);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("orphan"), std::string::npos);
  EXPECT_EQ(serialized(ingest_corpus(kFixtures / "mini_corpus", ExtractionOptions{})), serialized(store));
  EXPECT_THROW(ingest_corpus(kFixtures / "no_such_dir", ExtractionOptions{}), Error);
}

TEST(Enrich, NoContextKeepsEveryRecord) {
  const auto base = SemanticLattice::load(kData / "taxonomy.base.tsv");
  Tagger tagger(base, nullptr, AttributeLexicon::defaults());
  IndexRecord r;
  r.doc_id = "x";
  r.vis = {VisRecord{"vo1", "flower", 0.7, {}, {}, {}}, VisRecord{"vo2", "sky", 0.5, {}, {}, {}}};
  auto out = enrich_record(r, base, nullptr, tagger, PipelineConfig{});
  ASSERT_TRUE(out.enriched);
  for (const auto& e : *out.enriched) {
    EXPECT_EQ(e.provenance, Provenance::Kept);
    EXPECT_EQ(e.record.vsc, e.original_vsc);
  }
}

TEST(Enrich, RoseInAltSpecializesFlower) {
  auto store = enriched(kFixtures / "rose_in_alt", slurp(kData / "taxonomy.base.tsv"));
  ASSERT_EQ(store.records.size(), 1u);
  const auto& e = store.records[0].enriched->at(0);
  EXPECT_EQ(e.original_vsc, "flower");
  EXPECT_EQ(e.record.vsc, "rose");
  EXPECT_EQ(e.provenance, Provenance::Replaced);
}

TEST(Enrich, Idempotent) {
  auto store = enriched(kFixtures / "mini_corpus", slurp(kData / "taxonomy.base.tsv"));
  const auto once = serialized(store);
  enrich_store(store, slurp(kData / "taxonomy.base.tsv"), "", PipelineConfig{});
  EXPECT_EQ(serialized(store), once);
}

TEST(Enrich, KnowledgeGraftsMissingConcepts) {
  auto store = enriched(kFixtures / "rose_in_alt", slurp(kData / "taxonomy.fragment.tsv"),
                        slurp(kData / "taxonomy.base.tsv"));
  const auto& rec = store.records[0];
  ASSERT_FALSE(rec.lattice_additions.empty());
  EXPECT_TRUE(std::any_of(rec.lattice_additions.begin(), rec.lattice_additions.end(),
                          [](const LatticeAddition& a) { return a.id == "rose"; }));
  EXPECT_EQ(rec.enriched->at(0).record.vsc, "rose");
  const auto base = SemanticLattice::load(kData / "taxonomy.fragment.tsv");
  const auto doc = document_lattice(base, rec);
  EXPECT_EQ(doc.relation("rose", "flower"), SemRelation::Specific);
  EXPECT_FALSE(base.contains("rose"));
}

TEST(Enrich, UnknownVisualConceptBecomesRoot) {
  const auto base = SemanticLattice::load(kData / "taxonomy.fragment.tsv");
  Tagger tagger(base, nullptr, AttributeLexicon::defaults());
  IndexRecord r;
  r.doc_id = "x";
  r.vis = {VisRecord{"vo1", "unicorn", 0.7, {}, {}, {}}};
  auto out = enrich_record(r, base, nullptr, tagger, PipelineConfig{});
  ASSERT_EQ(out.lattice_additions.size(), 1u);
  EXPECT_EQ(out.lattice_additions[0].parents.size(), 0u);
  EXPECT_TRUE(std::any_of(out.log.begin(), out.log.end(),
                          [](const std::string& l) { return l.find("added as a root") != std::string::npos; }));
}

TEST(Graft, AddsAncestorsFirst) {
  auto target = SemanticLattice::load(kData / "taxonomy.fragment.tsv");
  const auto source = SemanticLattice::load(kData / "taxonomy.base.tsv");
  std::vector<LatticeAddition> added;
  graft(target, source, "cathedral", &added);
  ASSERT_FALSE(added.empty());
  EXPECT_EQ(added.back().id, "cathedral");
  EXPECT_EQ(target.relation("cathedral", "construction"), SemRelation::Specific);
}

TEST(EnrichStore, ThreadCountDoesNotMatter) {
  const auto tax = slurp(kData / "taxonomy.base.tsv");
  const auto dir = fs::temp_directory_path() / "visenrich_pipeline_threads";
  fs::remove_all(dir);
  visenrich::testing::CorpusOptions opts;
  opts.documents = 30;
  opts.seed = 11;
  visenrich::testing::generate_corpus(SemanticLattice::load(kData / "taxonomy.base.tsv"), opts).write(dir);
  auto a = ingest_corpus(dir, ExtractionOptions{});
  auto b = a;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  enrich_store(a, tax, "", PipelineConfig{});
  omp_set_num_threads(4);
  enrich_store(b, tax, "", PipelineConfig{});
  omp_set_num_threads(saved);
  EXPECT_EQ(a, b);
  fs::remove_all(dir);
}

TEST(SearchIndexBuild, RequiresHeaderUnlessEmpty) {
  EXPECT_NO_THROW(build_search_index(IndexStore{}));
  auto store = ingest_corpus(kFixtures / "mini_corpus", ExtractionOptions{});
  EXPECT_THROW(build_search_index(store), Error);
}

TEST(EndToEnd, Deterministic) {
  auto run = [] {
    auto store = enriched(kFixtures / "mini_corpus", slurp(kData / "taxonomy.base.tsv"));
    auto idx = build_search_index(store);
    std::string out;
    for (auto s : kAllStrategies) {
      for (const auto& e : idx.rank(idx.parse("Whirly Flowers"), s, 0).entries) {
        out += e.doc_id + ":" + std::to_string(e.score) + ";";
      }
    }
    return out;
  };
  const auto first = run();
  EXPECT_EQ(run(), first);
  EXPECT_NE(first.find("d1"), std::string::npos);
}
