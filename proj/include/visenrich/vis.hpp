#pragma once

// Visual index structures (one per visual object) and the fixed signal
// vocabularies they draw from.
//
// Text form, one record per `vis` block:
//
//   vis vo1 { sem: rose@0.80; color: red=0.55, green=0.20; texture: uniform=1.00; spa: near(vo2); }
//
// `sem` is required; `color`, `texture` and `spa` are optional but, when
// present, appear in that order. A bare texture name means weight 1.0.
// '#' starts a comment that runs to end of line.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace visenrich {

inline constexpr std::size_t kVocabSize = 11;

enum class Color : std::uint8_t {
  Cyan, White, Green, Grey, Yellow, Black, Orange, Skin, Red, Blue, Purple
};

enum class Texture : std::uint8_t {
  Bumpy, Cracked, Disordered, Interlaced, Lined, Marbled, Netlike, Smeared, Spotted, Uniform, Whirly
};

enum class SpatialRelation : std::uint8_t {
  Covers, CoveredBy, PartOf, Touches, Disconnected, Right, Left, Above, Below, Near, Far
};

struct VocabEntry {
  std::string_view name;
  std::string_view code;
};

template <class E>
struct Vocabulary;

template <>
struct Vocabulary<Color> {
  static constexpr std::array<VocabEntry, kVocabSize> entries{{
      {"cyan", "C"}, {"white", "W"}, {"green", "Gn"}, {"grey", "G"},
      {"yellow", "Y"}, {"black", "B"}, {"orange", "O"}, {"skin", "S"},
      {"red", "R"}, {"blue", "Bl"}, {"purple", "P"},
  }};
};

template <>
struct Vocabulary<Texture> {
  static constexpr std::array<VocabEntry, kVocabSize> entries{{
      {"bumpy", "B"}, {"cracked", "C"}, {"disordered", "D"}, {"interlaced", "I"},
      {"lined", "L"}, {"marbled", "M"}, {"netlike", "N"}, {"smeared", "S"},
      {"spotted", "Sp"}, {"uniform", "U"}, {"whirly", "W"},
  }};
};

template <>
struct Vocabulary<SpatialRelation> {
  static constexpr std::array<VocabEntry, kVocabSize> entries{{
      {"covers", "C"}, {"covered_by", "C_B"}, {"part_of", "P"}, {"touches", "T"},
      {"disconnected", "D"}, {"right", "R"}, {"left", "L"}, {"above", "A"},
      {"below", "B"}, {"near", "N"}, {"far", "F"},
  }};
};

template <class E>
constexpr std::size_t vocab_index(E e) {
  return static_cast<std::size_t>(e);
}

template <class E>
constexpr std::string_view vocab_name(E e) {
  return Vocabulary<E>::entries[vocab_index(e)].name;
}

template <class E>
constexpr std::optional<E> parse_vocab(std::string_view name) {
  for (std::size_t i = 0; i < kVocabSize; ++i) {
    if (Vocabulary<E>::entries[i].name == name) return static_cast<E>(i);
  }
  return std::nullopt;
}

struct SpatialLink {
  SpatialRelation relation;
  std::string target;

  auto operator<=>(const SpatialLink&) const = default;
};

struct VisRecord {
  std::string vo_id;
  std::string vsc;
  double r_vsc = 0.0;
  std::map<Color, double> colors;
  std::map<Texture, double> textures;
  std::vector<SpatialLink> spatial;  // sorted, no duplicates

  bool operator==(const VisRecord&) const = default;
};

using FacetVector = std::array<double, kVocabSize>;

struct FacetVectors {
  FacetVector color{};
  FacetVector texture{};
  FacetVector spatial{};

  bool operator==(const FacetVectors&) const = default;
};

// Throws RangeError / Error on the first violated record invariant.
void validate(const VisRecord& record);

// Record invariants plus document-level ones: unique vo ids, spatial targets
// present and distinct from the source.
void validate_document(std::span<const VisRecord> records);

// Throws ParseError with line/column, RangeError for out-of-range values.
std::vector<VisRecord> parse_vis(std::string_view text);

// Canonical text: records ordered by vo_id, facet entries in vocabulary
// order, shortest round-trip decimals with at least two fraction digits.
std::string serialize_vis(std::span<const VisRecord> records);

FacetVectors facet_vectors(const VisRecord& record);

// Shortest decimal that parses back to `value`, with at least two fraction
// digits ("0.80", "1.00", "0.125").
std::string format_decimal(double value);

}  // namespace visenrich
