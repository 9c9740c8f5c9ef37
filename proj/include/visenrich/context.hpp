#pragma once

// Contextual text around a web image: extraction areas, vocabulary tagging,
// syntactic patterns and the syntactic terms they produce.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "visenrich/lattice.hpp"
#include "visenrich/vis.hpp"

namespace visenrich {

enum class AreaKind { AltAttribute, SrcTokens, SurroundingText };

std::string_view to_string(AreaKind kind);
std::optional<AreaKind> parse_area_kind(std::string_view name);

struct ImpactConfig {
  double alt = 0.9;
  double src = 0.7;
  double surrounding = 0.5;

  double for_kind(AreaKind kind) const;
  bool operator==(const ImpactConfig&) const = default;
};

struct ExtractionOptions {
  ImpactConfig impacts;
  std::size_t window = 600;  // characters between the image tag and a text block
};

struct ExtractionArea {
  AreaKind kind;
  std::vector<std::string> tokens;
  double base_impact = 0.0;

  bool operator==(const ExtractionArea&) const = default;
};

// Lowercased word tokens; splits on anything that is not a letter, digit or
// non-ASCII byte and drops purely numeric tokens.
std::vector<std::string> tokenize(std::string_view text);

// Plural/inflection candidates for a token, most literal first:
// "flowers" -> {"flowers", "flower"}, "bodies" -> {"bodies", "body", ...}.
std::vector<std::string> fold_candidates(std::string_view token);

// Single canonical stem (plural suffix stripping) used for bag-of-words
// indexing.
std::string stem(std::string_view token);

// Locates the image whose src matches `image_ref` (full value, basename or
// stem; empty matches the first image) and returns its alt tokens, src
// filename tokens and the text blocks within `options.window` characters.
// Areas without tokens are omitted. A missing image yields an empty list and
// a warning.
std::vector<ExtractionArea> extract_areas(std::string_view html, std::string_view image_ref,
                                          const ExtractionOptions& options,
                                          std::vector<std::string>* warnings = nullptr);

enum class Category { Sem, Color, Texture, Spatial, Other };

std::string_view to_string(Category c);

struct TaggedToken {
  std::string surface;   // words as they appeared, space-joined for phrases
  Category category = Category::Other;
  std::string id;   // lattice id for Sem, vocabulary name for attributes
  double imp = 1.0;

  bool operator==(const TaggedToken&) const = default;
};

// Words and phrases that map onto the color, texture and spatial
// vocabularies. The defaults contain every vocabulary name plus a small
// synonym table ("gray" -> grey, "smooth" -> uniform, "in front of" -> covers).
class AttributeLexicon {
 public:
  static AttributeLexicon defaults();

  void add(std::string_view phrase, Category category, std::size_t vocab_index);

  struct Entry {
    Category category;
    std::size_t index;
  };
  const Entry* find(std::string_view phrase) const;
  std::size_t max_phrase_words() const noexcept { return max_words_; }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
  std::size_t max_words_ = 1;
};

class Tagger {
 public:
  // `knowledge` (optional) is a wider taxonomy whose concepts may be inserted
  // into the lattice; its members also tag as Sem.
  Tagger(const SemanticLattice& lattice, const SemanticLattice* knowledge, AttributeLexicon lexicon);

  std::vector<TaggedToken> tag(std::span<const std::string> tokens) const;

 private:
  std::optional<TaggedToken> lookup_word(std::string_view word) const;

  const SemanticLattice* lattice_;
  const SemanticLattice* knowledge_;
  AttributeLexicon lexicon_;
};

struct PatternElement {
  Category category;
  std::size_t min_count = 1;
  std::size_t max_count = 1;

  bool operator==(const PatternElement&) const = default;
};

// Sequence of categories, e.g. "SEM OTHER{0..3} COLOR SEM".
class SyntacticPattern {
 public:
  static SyntacticPattern parse(std::string_view text);

  const std::vector<PatternElement>& elements() const noexcept { return elements_; }
  std::size_t max_gap() const;
  std::string to_string() const;
  // ECMAScript regex over one letter per token (S C T P O).
  const std::string& regex_source() const noexcept { return regex_; }
  const std::regex& compiled() const { return *compiled_; }

  bool operator==(const SyntacticPattern& o) const { return elements_ == o.elements_; }

 private:
  std::vector<PatternElement> elements_;
  std::string regex_;
  std::shared_ptr<const std::regex> compiled_;
};

std::vector<SyntacticPattern> default_patterns();

struct WeightedConcept {
  std::string id;
  double value = 0.0;

  bool operator==(const WeightedConcept&) const = default;
};

struct SyntacticTerm {
  std::optional<WeightedConcept> head;
  std::map<Color, double> colors;
  std::map<Texture, double> textures;
  std::map<SpatialRelation, double> spatials;

  std::size_t field_count() const {
    return (head ? 1 : 0) + colors.size() + textures.size() + spatials.size();
  }
  bool operator==(const SyntacticTerm&) const = default;
};

// Leftmost non-overlapping matches of each pattern, in pattern order. A match
// holding k semantic tokens yields k terms; colors and textures attach to the
// nearest semantic token (ties go to the following one), spatial relations to
// every semantic token of the match. Exact duplicates and terms subsumed by an
// earlier or later term with the same head are dropped.
std::vector<SyntacticTerm> apply_patterns(std::span<const TaggedToken> stream,
                                          std::span<const SyntacticPattern> patterns);

FacetVectors term_vectors(const SyntacticTerm& term);

struct TaggedArea {
  AreaKind kind;
  double base_impact = 0.0;
  std::vector<TaggedToken> tokens;
};

struct ContextualConcept {
  Category category;
  std::string id;
  double imp = 0.0;
  AreaKind area;

  bool operator==(const ContextualConcept&) const = default;
};

// One entry per distinct (category, concept) over all non-Other tokens, in
// order of first occurrence; imp is the largest base impact among the areas
// where it occurs.
std::vector<ContextualConcept> assign_impacts(std::span<const TaggedArea> areas);

struct ContextAnalysis {
  std::vector<ContextualConcept> concepts;
  std::vector<SyntacticTerm> terms;
};

// Tag each area, assign impacts, stamp them on the tokens and run the
// patterns area by area (matches never span two areas).
ContextAnalysis analyze_context(std::span<const ExtractionArea> areas, const Tagger& tagger,
                                std::span<const SyntacticPattern> patterns);

}  // namespace visenrich
