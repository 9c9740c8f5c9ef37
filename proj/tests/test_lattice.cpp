#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "visenrich/error.hpp"
#include "visenrich/lattice.hpp"

using namespace visenrich;
using namespace visenrich::testing;
namespace fs = std::filesystem;

namespace {

SemanticLattice base() { return SemanticLattice::load(fs::path(VISENRICH_DATA_DIR) / "taxonomy.base.tsv"); }

EdgeList edges_of(const SemanticLattice& lattice) {
  EdgeList g;
  for (const auto& id : lattice.ids()) {
    g.ids.push_back(id);
    g.parents[id] = lattice.parents(id);
  }
  return g;
}

}  // namespace

TEST(Lattice, FragmentHasFiveConcepts) {
  auto l = SemanticLattice::load(fs::path(VISENRICH_DATA_DIR) / "taxonomy.fragment.tsv");
  EXPECT_EQ(l.size(), 5u);
  EXPECT_EQ(l.longest_path(), 2);
  EXPECT_EQ(l.roots(), std::vector<std::string>{"entity"});
}

TEST(Lattice, EmptyTaxonomyHasNoRoots) {
  EXPECT_THROW(SemanticLattice::from_taxonomy(""), TaxonomyError);
  EXPECT_THROW(SemanticLattice::from_taxonomy("# only a comment\n\n"), TaxonomyError);
}

TEST(Lattice, TwoCycleIsRejected) {
  EXPECT_THROW(SemanticLattice::from_taxonomy("entity\t\t\nflower\trose\t\nrose\tflower\t\n"), TaxonomyError);
}

TEST(Lattice, DanglingParentAndDuplicates) {
  EXPECT_THROW(SemanticLattice::from_taxonomy("rose\tflower\t\n"), TaxonomyError);
  EXPECT_THROW(SemanticLattice::from_taxonomy("a\t\t\na\t\t\n"), TaxonomyError);
  EXPECT_THROW(SemanticLattice::from_taxonomy("a\t\tx\nb\t\tx\n"), TaxonomyError);
}

TEST(Lattice, LoadLowercasesAndResolvesSynonyms) {
  auto l = SemanticLattice::from_taxonomy("Entity\t\t\nFlower\tENTITY\tBloom\n");
  EXPECT_EQ(l.resolve("bloom").value(), "flower");
  EXPECT_EQ(l.resolve("FLOWER").value(), "flower");
  EXPECT_FALSE(l.resolve("tree"));
}

TEST(Lattice, InsertRoseAndCathedral) {
  auto l = SemanticLattice::load(fs::path(VISENRICH_DATA_DIR) / "taxonomy.fragment.tsv");
  const std::vector<std::string> flower{"flower"};
  const std::vector<std::string> building{"building"};
  ASSERT_TRUE(l.insert({"rose", {}}, flower));
  ASSERT_TRUE(l.insert({"cathedral", {"minster"}}, building));
  EXPECT_EQ(l.relation("rose", "flower"), SemRelation::Specific);
  EXPECT_EQ(l.relation("cathedral", "building"), SemRelation::Specific);
  EXPECT_EQ(l.relation("minster", "construction"), SemRelation::Specific);
  EXPECT_EQ(l.longest_path(), 3);
}

TEST(Lattice, InsertExistingIsNoOp) {
  auto l = base();
  const auto before = l;
  const std::vector<std::string> parents{"vegetation"};
  EXPECT_FALSE(l.insert({"flower", {}}, parents));
  EXPECT_FALSE(l.insert({"new", {"bloom"}}, parents));
  EXPECT_EQ(l, before);
}

TEST(Lattice, InsertUnknownParentThrows) {
  auto l = base();
  const std::vector<std::string> parents{"nowhere"};
  EXPECT_THROW(l.insert({"x", {}}, parents), UnknownConceptError);
}

TEST(Lattice, Relations) {
  auto l = base();
  EXPECT_EQ(l.relation("flower", "rose"), SemRelation::Generic);
  EXPECT_EQ(l.relation("rose", "rose"), SemRelation::Equal);
  EXPECT_EQ(l.relation("rose", "cathedral"), SemRelation::Unrelated);
  EXPECT_EQ(l.relation("bloom", "rose"), SemRelation::Generic);
  EXPECT_THROW(l.relation("rose", "unicorn"), UnknownConceptError);
}

TEST(Lattice, PathLengthNorm) {
  auto l = base();
  ASSERT_EQ(l.longest_path(), 3);
  EXPECT_NEAR(l.path_length_norm("rose", "flower"), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(l.path_length_norm("rose", "rose"), 0.0);
  EXPECT_DOUBLE_EQ(l.path_length_norm("rose", "entity"), 1.0);
  EXPECT_THROW(l.path_length_norm("rose", "cathedral"), Error);
}

TEST(Lattice, PathSimilarity) {
  auto l = base();
  EXPECT_EQ(l.path_similarity("rose", "rose"), 1.0);
  EXPECT_DOUBLE_EQ(l.path_similarity("rose", "flower"), 0.5);
  EXPECT_NEAR(l.path_similarity("rose", "cathedral"), 1.0 / 7.0, 1e-12);
}

TEST(Lattice, DisconnectedConceptsHaveZeroSimilarity) {
  auto l = SemanticLattice::from_taxonomy("a\t\t\nb\t\t\nc\ta\t\n");
  EXPECT_EQ(l.path_similarity("c", "b"), 0.0);
  EXPECT_EQ(l.relation("c", "b"), SemRelation::Unrelated);
}

TEST(Lattice, TaxonomyTextRoundTrip) {
  auto l = base();
  EXPECT_EQ(SemanticLattice::from_taxonomy(l.to_taxonomy()), l);
}

TEST(LatticeProperty, RandomDagsAgreeWithOracles) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    auto g = random_dag(rng, n);
    auto l = SemanticLattice::from_taxonomy(g.to_taxonomy());
    EXPECT_EQ(l.longest_path(), longest_chain(g));
    for (const auto& a : g.ids) {
      for (const auto& b : g.ids) {
        const auto up = up_distance(g, a, b);
        EXPECT_EQ(l.chain_length(a, b), a == b ? std::optional<int>(0) : (up ? up : up_distance(g, b, a)));
        EXPECT_EQ(l.path_similarity(a, b), oracle_similarity(g, a, b));
        const auto r = l.relation(a, b);
        EXPECT_EQ(r == SemRelation::Specific, a != b && up.has_value()) << a << " " << b;
        if (l.chain_length(a, b)) {
          EXPECT_EQ(l.path_length_norm(a, b), l.path_length_norm(b, a));
          EXPECT_EQ(l.path_length_norm(a, b) == 0.0, a == b);
        }
      }
    }
  }
}

TEST(LatticeProperty, LongestPathAfterInsertionsMatchesRecount) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    auto g = random_dag(rng, 6);
    auto l = SemanticLattice::from_taxonomy(g.to_taxonomy());
    for (int k = 0; k < 8; ++k) {
      const auto id = "n" + std::to_string(k);
      std::vector<std::string> parents{g.ids[std::uniform_int_distribution<std::size_t>(0, g.ids.size() - 1)(rng)]};
      ASSERT_TRUE(l.insert({id, {}}, parents));
      g.ids.push_back(id);
      g.parents[id] = parents;
      EXPECT_EQ(l.longest_path(), longest_chain(g));
    }
  }
}

TEST(LatticeProperty, InsertionIsConservativeOnBaseTaxonomy) {
  const auto l = base();
  const auto g = edges_of(l);
  for (const auto& parent : g.ids) {
    auto grown = l;
    const std::vector<std::string> ps{parent};
    ASSERT_TRUE(grown.insert({"fresh", {}}, ps));
    for (const auto& a : g.ids) {
      for (const auto& b : g.ids) ASSERT_EQ(grown.relation(a, b), l.relation(a, b));
    }
  }
}
