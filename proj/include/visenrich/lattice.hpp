#pragma once

// Hypernym/hyponym lattice of semantic concepts.
//
// Concepts are addressed by lowercase ids; synonyms resolve to exactly one id.
// Edges are is_a links (child -> parent). The graph is a DAG: a concept may
// have several parents, and every non-root concept has at least one.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace visenrich {

struct Concept {
  std::string id;
  std::vector<std::string> synonyms;

  bool operator==(const Concept&) const = default;
};

enum class SemRelation {
  Equal,
  Generic,    // a is an ancestor of b
  Specific,   // a is a descendant of b
  Unrelated,
};

std::string_view to_string(SemRelation r);

class SemanticLattice {
 public:
  // Builds a lattice from taxonomy text: one record per line,
  // `concept <TAB> parent1,parent2 <TAB> synonym1,synonym2`. Blank lines and
  // lines starting with '#' are ignored. Throws TaxonomyError.
  static SemanticLattice from_taxonomy(std::string_view text);
  static SemanticLattice load(const std::filesystem::path& path);

  // Canonical taxonomy text (declaration order); from_taxonomy(to_taxonomy())
  // reproduces the lattice.
  std::string to_taxonomy() const;

  // Attaches `concept` below `parents`. Returns false (and changes nothing)
  // when the id or one of its synonyms already names a concept. An empty
  // parent list creates a new root.
  bool insert(const Concept& c, std::span<const std::string> parents);

  // Canonical id for an id or synonym.
  std::optional<std::string_view> resolve(std::string_view token) const;
  bool contains(std::string_view token) const { return resolve(token).has_value(); }

  SemRelation relation(std::string_view a, std::string_view b) const;

  // Edge count of the shortest is_a chain between a and b divided by
  // longest_path(), clamped to [0,1]. Throws Error if a and b are unrelated.
  double path_length_norm(std::string_view a, std::string_view b) const;

  // 1 for equal concepts, 1/(1+d) for shortest undirected distance d, 0 when
  // disconnected.
  double path_similarity(std::string_view a, std::string_view b) const;

  // Edge count of the shortest directed chain from descendant to ancestor, in
  // either direction; nullopt when neither is an ancestor of the other.
  std::optional<int> chain_length(std::string_view a, std::string_view b) const;

  // Edges on the longest root-to-leaf chain.
  int longest_path() const noexcept { return longest_path_; }

  std::size_t size() const noexcept { return nodes_.size(); }
  const Concept& concept_at(std::size_t i) const { return nodes_[i].info; }
  const Concept& concept_of(std::string_view token) const { return nodes_[index_of(token)].info; }
  std::vector<std::string> ids() const;
  std::vector<std::string> parents(std::string_view id) const;
  std::vector<std::string> roots() const;

  bool operator==(const SemanticLattice& other) const;

 private:
  struct Node {
    Concept info;
    std::vector<std::size_t> parents;
    std::vector<std::size_t> children;
    int depth = 0;                                      // longest chain from a root
    std::unordered_map<std::size_t, int> ancestors;     // ancestor -> shortest distance
  };

  std::size_t index_of(std::string_view token) const;  // throws UnknownConceptError
  void register_token(const std::string& token, std::size_t index);
  void attach(std::size_t index);

  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> by_token_;
  int longest_path_ = 0;
};

// Lowercases ASCII letters; other bytes pass through.
std::string to_lower(std::string_view s);

}  // namespace visenrich
