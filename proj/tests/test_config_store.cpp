#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "visenrich/config.hpp"
#include "visenrich/error.hpp"
#include "visenrich/index_store.hpp"

using namespace visenrich;
namespace fs = std::filesystem;

namespace {

IndexRecord sample_record(const std::string& id) {
  IndexRecord r;
  r.doc_id = id;
  r.html_path = id + ".html";
  r.vis_path = id + ".vis";
  r.areas = {{AreaKind::AltAttribute, {"red", "rose"}, 0.9}, {AreaKind::SurroundingText, {"garden"}, 0.5}};
  r.vis = {VisRecord{"vo1", "flower", 0.7, {{Color::Red, 0.6}}, {{Texture::Whirly, 1.0}}, {}},
           VisRecord{"vo2", "sky", 0.4, {}, {}, {{SpatialRelation::Above, "vo1"}}}};
  return r;
}

IndexRecord enriched_record(const std::string& id) {
  auto r = sample_record(id);
  r.concepts = {{Category::Sem, "rose", 0.9, AreaKind::AltAttribute},
                {Category::Color, "red", 0.9, AreaKind::AltAttribute}};
  SyntacticTerm t;
  t.head = WeightedConcept{"rose", 0.9};
  t.colors[Color::Red] = 0.9;
  t.spatials[SpatialRelation::Near] = 0.5;
  r.terms = {t};
  r.lattice_additions = {{"rose", {"rosa"}, {"flower"}}};
  EnrichedVisRecord e;
  e.record = r.vis[0];
  e.record.vsc = "rose";
  e.original_vsc = "flower";
  e.final_mu = 1.0 / 3.0;
  e.provenance = Provenance::Replaced;
  e.matched_term = 0;
  e.cx = "rose";
  e.mu_vsc = 0.97;
  e.mu_cx = 1.0;
  e.sim = 2.123456789;
  e.branch = "specialized";
  EnrichedVisRecord kept;
  kept.record = r.vis[1];
  kept.original_vsc = "sky";
  kept.final_mu = 0.4;
  kept.mu_vsc = 0.4;
  kept.branch = "unmatched";
  r.enriched = std::vector<EnrichedVisRecord>{e, kept};
  r.log = {"vo1: flower -> rose (specialized)"};
  return r;
}

}  // namespace

TEST(Config, Defaults) {
  auto c = parse_config("");
  EXPECT_EQ(c, PipelineConfig{});
  EXPECT_DOUBLE_EQ(c.fusion.t_mu, 0.1);
  EXPECT_DOUBLE_EQ(c.fusion.t_sim, 0.05);
  EXPECT_EQ(c.fusion.kernel, FacetKernel::Max);
  EXPECT_EQ(c.tconorm, TConorm::ProbabilisticSum);
  EXPECT_EQ(c.ndcg_n, (std::vector<int>{5, 10, 20}));
  EXPECT_EQ(c.patterns.size(), 5u);
}

TEST(Config, ParsesEveryKey) {
  auto c = parse_config(
      "# comment\n"
      "taxonomy = tax.tsv\n"
      "knowledge = /abs/wide.tsv\n"
      "impact.alt = 0.8\nimpact.src = 0.6\nimpact.surrounding = 0.3\n"
      "window = 100\n"
      "patterns = COLOR SEM; TEXTURE SEM\n"
      "tconorm = bsum\nkernel = min\nt_mu = 0.2\nt_sim = 0.3\nfusion_literal = true\nndcg_n = 1, 3\n",
      "/base");
  EXPECT_EQ(c.taxonomy, fs::path("/base/tax.tsv"));
  EXPECT_EQ(c.knowledge, fs::path("/abs/wide.tsv"));
  EXPECT_DOUBLE_EQ(c.extraction.impacts.surrounding, 0.3);
  EXPECT_EQ(c.extraction.window, 100u);
  EXPECT_EQ(c.patterns.size(), 2u);
  EXPECT_EQ(c.tconorm, TConorm::BoundedSum);
  EXPECT_EQ(c.fusion.kernel, FacetKernel::Min);
  EXPECT_TRUE(c.fusion.literal_correction);
  EXPECT_EQ(c.ndcg_n, (std::vector<int>{1, 3}));
  EXPECT_EQ(parse_config(to_config_text(c)), c);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("colour = red\n"), ParseError);
  EXPECT_THROW(parse_config("t_mu\n"), ParseError);
  EXPECT_THROW(parse_config("t_mu = high\n"), ParseError);
  EXPECT_THROW(parse_config("t_mu = 1.5\n"), RangeError);
  EXPECT_THROW(parse_config("impact.alt = -0.1\n"), RangeError);
  EXPECT_THROW(parse_config("tconorm = sum\n"), ParseError);
  EXPECT_THROW(parse_config("ndcg_n = 0\n"), RangeError);
  EXPECT_THROW(parse_config("patterns = SEM BANANA\n"), ParseError);
  EXPECT_THROW(load_config("/definitely/not/here.conf"), Error);
}

TEST(Config, LoadChecksReferencedFiles) {
  const auto dir = fs::temp_directory_path() / "visenrich_config_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "c.conf") << "taxonomy = missing.tsv\n";
  }
  EXPECT_THROW(load_config(dir / "c.conf"), Error);
  {
    std::ofstream(dir / "t.tsv") << "entity\t\t\n";
    std::ofstream(dir / "c.conf") << "taxonomy = t.tsv\n";
  }
  EXPECT_EQ(load_config(dir / "c.conf").taxonomy, dir / "t.tsv");
  fs::remove_all(dir);
}

TEST(Store, RoundTrip) {
  IndexStore s;
  s.put(enriched_record("b"));
  s.put(sample_record("a"));
  PipelineConfig cfg;
  cfg.fusion.kernel = FacetKernel::Product;
  s.header = StoreHeader{"entity\t\t\nflower\tentity\t\n", "", cfg};
  ASSERT_EQ(s.records.front().doc_id, "a");
  std::stringstream out;
  write_store(out, s);
  auto back = read_store(out);
  EXPECT_EQ(back, s);
  std::stringstream again;
  write_store(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Store, PutReplaces) {
  IndexStore s;
  s.put(sample_record("a"));
  auto r = sample_record("a");
  r.html_path = "other.html";
  s.put(r);
  ASSERT_EQ(s.records.size(), 1u);
  EXPECT_EQ(s.find("a")->html_path, "other.html");
  EXPECT_EQ(s.find("zz"), nullptr);
}

TEST(Store, MalformedLines) {
  std::stringstream junk("{not json\n");
  EXPECT_THROW(read_store(junk), ParseError);
  std::stringstream dup;
  IndexStore s;
  s.put(sample_record("a"));
  write_store(dup, s);
  const auto line = dup.str();
  std::stringstream twice(line + line);
  EXPECT_THROW(read_store(twice), Error);
  std::stringstream wrong_type("{\"type\":\"blob\"}\n");
  EXPECT_THROW(read_store(wrong_type), ParseError);
}

TEST(Store, SaveAndLoadFile) {
  const auto path = fs::temp_directory_path() / "visenrich_store_test.jsonl";
  IndexStore s;
  s.put(enriched_record("x"));
  save_store(path, s);
  EXPECT_EQ(load_store(path), s);
  fs::remove(path);
  EXPECT_THROW(load_store(path), Error);
}
