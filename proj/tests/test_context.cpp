#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "visenrich/context.hpp"
#include "visenrich/error.hpp"

using namespace visenrich;
namespace fs = std::filesystem;

namespace {

const SemanticLattice& base() {
  static const auto l = SemanticLattice::load(fs::path(VISENRICH_DATA_DIR) / "taxonomy.base.tsv");
  return l;
}

std::string fixture(const std::string& name) {
  std::ifstream in(fs::path(VISENRICH_FIXTURE_DIR) / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Category> categories(const std::string& text) {
  Tagger tagger(base(), nullptr, AttributeLexicon::defaults());
  std::vector<Category> out;
  for (const auto& t : tagger.tag(tokenize(text))) out.push_back(t.category);
  return out;
}

std::vector<TaggedToken> tagged(const std::string& text, double imp = 1.0) {
  Tagger tagger(base(), nullptr, AttributeLexicon::defaults());
  auto out = tagger.tag(tokenize(text));
  for (auto& t : out) t.imp = imp;
  return out;
}

const ExtractionArea* area(const std::vector<ExtractionArea>& areas, AreaKind kind) {
  for (const auto& a : areas) {
    if (a.kind == kind) return &a;
  }
  return nullptr;
}

}  // namespace

TEST(Tokenize, SplitsAndLowercases) {
  EXPECT_EQ(tokenize("Red_Rose.jpg, in 2024!"), (std::vector<std::string>{"red", "rose", "jpg", "in"}));
  EXPECT_EQ(stem("flowers"), "flower");
  EXPECT_EQ(stem("bodies"), "body");
  EXPECT_EQ(stem("glass"), "glass");
}

TEST(Extract, ImageAttributesSplit) {
  const std::string html = R"(<p><img src="red_rose.jpg" alt="a rose in the garden"></p>)";
  auto areas = extract_areas(html, "red_rose", ExtractionOptions{});
  ASSERT_NE(area(areas, AreaKind::SrcTokens), nullptr);
  EXPECT_EQ(area(areas, AreaKind::SrcTokens)->tokens, (std::vector<std::string>{"red", "rose"}));
  EXPECT_EQ(area(areas, AreaKind::AltAttribute)->tokens,
            (std::vector<std::string>{"a", "rose", "in", "the", "garden"}));
  EXPECT_DOUBLE_EQ(area(areas, AreaKind::AltAttribute)->base_impact, 0.9);
}

TEST(Extract, NoSurroundingTextGivesTwoAreas) {
  auto areas = extract_areas(fixture("bare.html"), "", ExtractionOptions{});
  EXPECT_EQ(areas.size(), 2u);
  EXPECT_EQ(area(areas, AreaKind::SurroundingText), nullptr);
}

TEST(Extract, FigureCaptionIsSurroundingText) {
  auto areas = extract_areas(fixture("garden.html"), "red_rose", ExtractionOptions{});
  const auto* s = area(areas, AreaKind::SurroundingText);
  ASSERT_NE(s, nullptr);
  const auto& toks = s->tokens;
  EXPECT_NE(std::find(toks.begin(), toks.end(), "whirly"), toks.end());
  EXPECT_NE(std::find(toks.begin(), toks.end(), "wall"), toks.end());
  EXPECT_EQ(std::find(toks.begin(), toks.end(), "logo"), toks.end());
}

TEST(Extract, WindowLimitsSurroundingText) {
  ExtractionOptions narrow;
  narrow.window = 0;
  auto areas = extract_areas(fixture("garden.html"), "red_rose", narrow);
  EXPECT_EQ(area(areas, AreaKind::SurroundingText), nullptr);
}

TEST(Extract, MissingImageWarns) {
  std::vector<std::string> warnings;
  auto areas = extract_areas(fixture("garden.html"), "nothing_here", ExtractionOptions{}, &warnings);
  EXPECT_TRUE(areas.empty());
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Tagging, Examples) {
  using C = Category;
  EXPECT_EQ(categories("vegetation scene with red flowers"),
            (std::vector<C>{C::Sem, C::Other, C::Other, C::Color, C::Sem}));
  EXPECT_EQ(categories("whirly water"), (std::vector<C>{C::Texture, C::Sem}));
  EXPECT_EQ(categories("hello world"), (std::vector<C>{C::Other, C::Other}));
}

TEST(Tagging, PhrasesAndSynonyms) {
  auto t = tagged("people in front of the minster");
  ASSERT_GE(t.size(), 3u);
  EXPECT_EQ(t[0].id, "person");
  EXPECT_EQ(t[1].category, Category::Spatial);
  EXPECT_EQ(t[1].id, "covers");
  EXPECT_EQ(t.back().id, "cathedral");
  EXPECT_EQ(tagged("gray")[0].id, "grey");
}

TEST(Tagging, Deterministic) {
  EXPECT_EQ(tagged("red roses near blue sea"), tagged("red roses near blue sea"));
}

TEST(Impacts, MaxRule) {
  std::vector<TaggedArea> areas{
      {AreaKind::AltAttribute, 0.9, tagged("rose")},
      {AreaKind::SurroundingText, 0.5, tagged("a rose and a tree")},
  };
  auto cs = assign_impacts(areas);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].id, "rose");
  EXPECT_DOUBLE_EQ(cs[0].imp, 0.9);
  EXPECT_EQ(cs[1].id, "tree");
  EXPECT_DOUBLE_EQ(cs[1].imp, 0.5);
  std::vector<TaggedArea> none{{AreaKind::AltAttribute, 0.9, tagged("hello world")}};
  EXPECT_TRUE(assign_impacts(none).empty());
}

TEST(Impacts, BoundedAndIdempotent) {
  std::vector<TaggedArea> areas{
      {AreaKind::AltAttribute, 0.9, tagged("red rose")},
      {AreaKind::SrcTokens, 0.7, tagged("rose wall")},
      {AreaKind::SurroundingText, 0.5, tagged("bumpy wall near sea")},
  };
  auto first = assign_impacts(areas);
  for (const auto& c : first) EXPECT_LE(c.imp, 0.9);
  auto again = areas;
  for (auto& a : again) {
    for (auto& t : a.tokens) {
      for (const auto& c : first) {
        if (c.id == t.id && c.category == t.category) t.imp = c.imp;
      }
    }
  }
  EXPECT_EQ(assign_impacts(again), first);
}

TEST(Patterns, ParseAndPrint) {
  auto p = SyntacticPattern::parse("SEM OTHER{0..3} COLOR SEM");
  EXPECT_EQ(p.elements().size(), 4u);
  EXPECT_EQ(p.max_gap(), 3u);
  EXPECT_EQ(SyntacticPattern::parse(p.to_string()), p);
  EXPECT_THROW(SyntacticPattern::parse("SEM FOO"), ParseError);
  EXPECT_THROW(SyntacticPattern::parse(""), ParseError);
}

TEST(Patterns, VegetationSceneSplitsIntoTwoTerms) {
  auto terms = apply_patterns(tagged("vegetation scene with red flowers", 0.9), default_patterns());
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].head->id, "vegetation");
  EXPECT_TRUE(terms[0].colors.empty());
  EXPECT_EQ(terms[1].head->id, "flower");
  EXPECT_DOUBLE_EQ(terms[1].colors.at(Color::Red), 0.9);
}

TEST(Patterns, SpatialAttachesToBothHeads) {
  const std::vector<SyntacticPattern> p{SyntacticPattern::parse("SEM SPATIAL SEM")};
  auto terms = apply_patterns(tagged("people near buildings"), p);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].head->id, "person");
  EXPECT_EQ(terms[1].head->id, "building");
  EXPECT_TRUE(terms[0].spatials.contains(SpatialRelation::Near));
  EXPECT_TRUE(terms[1].spatials.contains(SpatialRelation::Near));
}

TEST(Patterns, NoMatchOnOtherStream) {
  EXPECT_TRUE(apply_patterns(tagged("hello big world"), default_patterns()).empty());
}

TEST(Patterns, FieldCountFollowsPattern) {
  struct Case {
    const char* pattern;
    const char* text;
    std::size_t fields;
  };
  for (const auto& c : {Case{"COLOR SEM", "red rose", 2}, Case{"TEXTURE SEM", "whirly water", 2},
                        Case{"COLOR OTHER{0..1} COLOR SEM", "green and white walls", 3},
                        Case{"SEM SPATIAL SEM", "sea above sand", 2}}) {
    const std::vector<SyntacticPattern> p{SyntacticPattern::parse(c.pattern)};
    auto terms = apply_patterns(tagged(c.text), p);
    ASSERT_FALSE(terms.empty()) << c.pattern;
    EXPECT_EQ(terms.front().field_count(), c.fields) << c.pattern;
  }
}

TEST(Patterns, TermsOnlyUseInputConcepts) {
  auto stream = tagged("white and red tower near the blue sea with whirly flowers", 0.5);
  for (const auto& t : apply_patterns(stream, default_patterns())) {
    if (!t.head) continue;
    EXPECT_TRUE(std::any_of(stream.begin(), stream.end(), [&](const TaggedToken& tok) {
      return tok.category == Category::Sem && tok.id == t.head->id;
    }));
  }
}

TEST(TermVectors, Indices) {
  SyntacticTerm st;
  st.colors[Color::Red] = 0.9;
  auto v = term_vectors(st);
  EXPECT_EQ(v.color[8], 0.9);
  EXPECT_EQ(v.texture, FacetVector{});
  EXPECT_EQ(term_vectors(SyntacticTerm{}), FacetVectors{});
  SyntacticTerm near;
  near.spatials[SpatialRelation::Near] = 0.5;
  EXPECT_EQ(term_vectors(near).spatial[9], 0.5);
}

TEST(Analyze, AreasDoNotMerge) {
  Tagger tagger(base(), nullptr, AttributeLexicon::defaults());
  std::vector<ExtractionArea> areas{
      {AreaKind::AltAttribute, {"red"}, 0.9},
      {AreaKind::SurroundingText, {"rose"}, 0.5},
  };
  auto a = analyze_context(areas, tagger, default_patterns());
  EXPECT_TRUE(a.terms.empty());
  EXPECT_EQ(a.concepts.size(), 2u);
}
