#include "visenrich/context.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "visenrich/error.hpp"

namespace visenrich {

namespace {

template <class E>
void add_vocabulary(AttributeLexicon& lex, Category category) {
  for (std::size_t i = 0; i < kVocabSize; ++i) {
    std::string name(Vocabulary<E>::entries[i].name);
    std::replace(name.begin(), name.end(), '_', ' ');
    lex.add(name, category, i);
  }
}

template <class E>
void add_synonym(AttributeLexicon& lex, Category category, std::string_view phrase, E target) {
  lex.add(phrase, category, vocab_index(target));
}

char category_letter(Category c) {
  switch (c) {
    case Category::Sem: return 'S';
    case Category::Color: return 'C';
    case Category::Texture: return 'T';
    case Category::Spatial: return 'P';
    case Category::Other: return 'O';
  }
  return 'O';
}

std::optional<Category> parse_category(std::string_view name) {
  if (name == "SEM") return Category::Sem;
  if (name == "COLOR") return Category::Color;
  if (name == "TEXTURE") return Category::Texture;
  if (name == "SPATIAL") return Category::Spatial;
  if (name == "OTHER") return Category::Other;
  return std::nullopt;
}

template <class K>
bool map_subset(const std::map<K, double>& a, const std::map<K, double>& b) {
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || it->second < v) return false;
  }
  return true;
}

bool subsumes(const SyntacticTerm& big, const SyntacticTerm& small) {
  if (big.head.has_value() != small.head.has_value()) return false;
  if (big.head && (big.head->id != small.head->id || big.head->value < small.head->value)) return false;
  return map_subset(small.colors, big.colors) && map_subset(small.textures, big.textures) &&
         map_subset(small.spatials, big.spatials);
}

struct AnchoredTerm {
  std::size_t anchor;
  SyntacticTerm term;
};

// Drops duplicates and subsumed terms, then orders by anchor position.
std::vector<SyntacticTerm> prune(std::vector<AnchoredTerm> terms) {
  std::vector<bool> drop(terms.size(), false);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < terms.size() && !drop[i]; ++j) {
      if (i == j || drop[j]) continue;
      if (!subsumes(terms[j].term, terms[i].term)) continue;
      if (terms[i].term != terms[j].term || j < i) drop[i] = true;
    }
  }
  std::vector<AnchoredTerm> kept;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!drop[i]) kept.push_back(std::move(terms[i]));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const AnchoredTerm& a, const AnchoredTerm& b) { return a.anchor < b.anchor; });
  std::vector<SyntacticTerm> out;
  out.reserve(kept.size());
  for (auto& k : kept) out.push_back(std::move(k.term));
  return out;
}

template <class E>
void put_max(std::map<E, double>& m, E key, double value) {
  auto [it, inserted] = m.emplace(key, value);
  if (!inserted) it->second = std::max(it->second, value);
}

void attach_attribute(SyntacticTerm& term, const TaggedToken& tok, std::size_t index) {
  switch (tok.category) {
    case Category::Color: put_max(term.colors, static_cast<Color>(index), tok.imp); break;
    case Category::Texture: put_max(term.textures, static_cast<Texture>(index), tok.imp); break;
    case Category::Spatial: put_max(term.spatials, static_cast<SpatialRelation>(index), tok.imp); break;
    default: break;
  }
}

std::size_t attribute_index(const TaggedToken& tok) {
  std::optional<std::size_t> idx;
  switch (tok.category) {
    case Category::Color:
      if (auto c = parse_vocab<Color>(tok.id)) idx = vocab_index(*c);
      break;
    case Category::Texture:
      if (auto t = parse_vocab<Texture>(tok.id)) idx = vocab_index(*t);
      break;
    case Category::Spatial:
      if (auto s = parse_vocab<SpatialRelation>(tok.id)) idx = vocab_index(*s);
      break;
    default: break;
  }
  if (!idx) throw Error("token '" + tok.surface + "' is not a vocabulary concept");
  return *idx;
}

std::vector<AnchoredTerm> match_terms(std::span<const TaggedToken> stream,
                                      std::span<const SyntacticPattern> patterns) {
  std::string letters;
  letters.reserve(stream.size());
  for (const auto& t : stream) letters += category_letter(t.category);

  std::vector<AnchoredTerm> out;
  for (const auto& pattern : patterns) {
    auto begin = letters.cbegin();
    std::smatch m;
    while (std::regex_search(begin, letters.cend(), m, pattern.compiled())) {
      const auto first = static_cast<std::size_t>(m[0].first - letters.cbegin());
      const auto last = first + static_cast<std::size_t>(m.length(0));
      if (last == first) break;

      std::vector<std::size_t> sems;
      for (auto p = first; p < last; ++p) {
        if (stream[p].category == Category::Sem) sems.push_back(p);
      }
      if (sems.empty()) {
        AnchoredTerm t{first, {}};
        for (auto p = first; p < last; ++p) {
          if (stream[p].category != Category::Other) attach_attribute(t.term, stream[p], attribute_index(stream[p]));
        }
        out.push_back(std::move(t));
      } else {
        std::vector<AnchoredTerm> local;
        for (auto s : sems) {
          local.push_back(AnchoredTerm{s, {}});
          local.back().term.head = WeightedConcept{stream[s].id, stream[s].imp};
        }
        for (auto p = first; p < last; ++p) {
          const auto& tok = stream[p];
          if (tok.category == Category::Sem || tok.category == Category::Other) continue;
          const auto idx = attribute_index(tok);
          if (tok.category == Category::Spatial) {
            for (auto& t : local) attach_attribute(t.term, tok, idx);
            continue;
          }
          std::size_t best = 0;
          for (std::size_t k = 1; k < sems.size(); ++k) {
            auto d_best = sems[best] > p ? sems[best] - p : p - sems[best];
            auto d_k = sems[k] > p ? sems[k] - p : p - sems[k];
            if (d_k < d_best || (d_k == d_best && sems[k] > p)) best = k;
          }
          attach_attribute(local[best].term, tok, idx);
        }
        for (auto& t : local) out.push_back(std::move(t));
      }
      begin = letters.cbegin() + static_cast<std::ptrdiff_t>(last);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Sem: return "SEM";
    case Category::Color: return "COLOR";
    case Category::Texture: return "TEXTURE";
    case Category::Spatial: return "SPATIAL";
    case Category::Other: return "OTHER";
  }
  return "?";
}

AttributeLexicon AttributeLexicon::defaults() {
  AttributeLexicon lex;
  add_vocabulary<Color>(lex, Category::Color);
  add_vocabulary<Texture>(lex, Category::Texture);
  add_vocabulary<SpatialRelation>(lex, Category::Spatial);

  add_synonym(lex, Category::Color, "gray", Color::Grey);
  add_synonym(lex, Category::Color, "violet", Color::Purple);
  add_synonym(lex, Category::Color, "crimson", Color::Red);
  add_synonym(lex, Category::Color, "scarlet", Color::Red);
  add_synonym(lex, Category::Color, "azure", Color::Blue);
  add_synonym(lex, Category::Color, "navy", Color::Blue);
  add_synonym(lex, Category::Color, "turquoise", Color::Cyan);
  add_synonym(lex, Category::Color, "golden", Color::Yellow);

  add_synonym(lex, Category::Texture, "smooth", Texture::Uniform);
  add_synonym(lex, Category::Texture, "swirly", Texture::Whirly);
  add_synonym(lex, Category::Texture, "swirling", Texture::Whirly);
  add_synonym(lex, Category::Texture, "striped", Texture::Lined);
  add_synonym(lex, Category::Texture, "dotted", Texture::Spotted);
  add_synonym(lex, Category::Texture, "speckled", Texture::Spotted);
  add_synonym(lex, Category::Texture, "rough", Texture::Bumpy);
  add_synonym(lex, Category::Texture, "woven", Texture::Interlaced);
  add_synonym(lex, Category::Texture, "smudged", Texture::Smeared);
  add_synonym(lex, Category::Texture, "marble", Texture::Marbled);

  add_synonym(lex, Category::Spatial, "in front of", SpatialRelation::Covers);
  add_synonym(lex, Category::Spatial, "behind", SpatialRelation::CoveredBy);
  add_synonym(lex, Category::Spatial, "inside", SpatialRelation::PartOf);
  add_synonym(lex, Category::Spatial, "touching", SpatialRelation::Touches);
  add_synonym(lex, Category::Spatial, "outside", SpatialRelation::Disconnected);
  add_synonym(lex, Category::Spatial, "right of", SpatialRelation::Right);
  add_synonym(lex, Category::Spatial, "left of", SpatialRelation::Left);
  add_synonym(lex, Category::Spatial, "over", SpatialRelation::Above);
  add_synonym(lex, Category::Spatial, "on top of", SpatialRelation::Above);
  add_synonym(lex, Category::Spatial, "under", SpatialRelation::Below);
  add_synonym(lex, Category::Spatial, "beneath", SpatialRelation::Below);
  add_synonym(lex, Category::Spatial, "next to", SpatialRelation::Near);
  add_synonym(lex, Category::Spatial, "beside", SpatialRelation::Near);
  add_synonym(lex, Category::Spatial, "close to", SpatialRelation::Near);
  add_synonym(lex, Category::Spatial, "far from", SpatialRelation::Far);
  add_synonym(lex, Category::Spatial, "distant", SpatialRelation::Far);
  return lex;
}

void AttributeLexicon::add(std::string_view phrase, Category category, std::size_t vocab_index) {
  if (category == Category::Sem || category == Category::Other || vocab_index >= kVocabSize) {
    throw Error("attribute lexicon entries must name a color, texture or spatial concept");
  }
  auto words = tokenize(phrase);
  if (words.empty()) throw Error("empty lexicon phrase");
  std::string key;
  for (const auto& w : words) {
    if (!key.empty()) key += ' ';
    key += w;
  }
  entries_[key] = Entry{category, vocab_index};
  max_words_ = std::max(max_words_, words.size());
}

const AttributeLexicon::Entry* AttributeLexicon::find(std::string_view phrase) const {
  auto it = entries_.find(phrase);
  return it == entries_.end() ? nullptr : &it->second;
}

Tagger::Tagger(const SemanticLattice& lattice, const SemanticLattice* knowledge, AttributeLexicon lexicon)
    : lattice_(&lattice), knowledge_(knowledge), lexicon_(std::move(lexicon)) {}

std::optional<TaggedToken> Tagger::lookup_word(std::string_view word) const {
  for (const auto& form : fold_candidates(word)) {
    if (const auto* e = lexicon_.find(form)) {
      std::string_view name;
      switch (e->category) {
        case Category::Color: name = Vocabulary<Color>::entries[e->index].name; break;
        case Category::Texture: name = Vocabulary<Texture>::entries[e->index].name; break;
        default: name = Vocabulary<SpatialRelation>::entries[e->index].name; break;
      }
      return TaggedToken{std::string(word), e->category, std::string(name), 1.0};
    }
    if (auto id = lattice_->resolve(form)) {
      return TaggedToken{std::string(word), Category::Sem, std::string(*id), 1.0};
    }
    if (knowledge_ != nullptr) {
      if (auto id = knowledge_->resolve(form)) {
        return TaggedToken{std::string(word), Category::Sem, std::string(*id), 1.0};
      }
    }
  }
  return std::nullopt;
}

std::vector<TaggedToken> Tagger::tag(std::span<const std::string> tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    const auto max_words = std::min(lexicon_.max_phrase_words(), tokens.size() - i);
    for (auto n = max_words; n >= 2 && !matched; --n) {
      std::string phrase = tokens[i];
      for (std::size_t k = 1; k < n; ++k) phrase += ' ' + tokens[i + k];
      if (const auto* e = lexicon_.find(phrase)) {
        std::string_view name = e->category == Category::Color     ? Vocabulary<Color>::entries[e->index].name
                                : e->category == Category::Texture ? Vocabulary<Texture>::entries[e->index].name
                                                                   : Vocabulary<SpatialRelation>::entries[e->index].name;
        out.push_back(TaggedToken{phrase, e->category, std::string(name), 1.0});
        i += n;
        matched = true;
      }
    }
    if (matched) continue;
    if (auto tok = lookup_word(tokens[i])) {
      out.push_back(std::move(*tok));
    } else {
      out.push_back(TaggedToken{tokens[i], Category::Other, {}, 1.0});
    }
    ++i;
  }
  return out;
}

SyntacticPattern SyntacticPattern::parse(std::string_view text) {
  SyntacticPattern p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    auto end = text.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = text.size();
    auto word = text.substr(pos, end - pos);
    pos = end;

    PatternElement el{Category::Other, 1, 1};
    auto brace = word.find('{');
    auto name = word.substr(0, brace);
    auto cat = parse_category(name);
    if (!cat) throw ParseError("unknown pattern category '" + std::string(name) + "'", 0, 0);
    el.category = *cat;
    if (brace != std::string_view::npos) {
      if (word.back() != '}') throw ParseError("malformed repetition in '" + std::string(word) + "'", 0, 0);
      auto range = std::string(word.substr(brace + 1, word.size() - brace - 2));
      auto dots = range.find("..");
      char* endp = nullptr;
      auto lo = std::strtoul(range.c_str(), &endp, 10);
      unsigned long hi = lo;
      if (dots != std::string::npos) hi = std::strtoul(range.c_str() + dots + 2, &endp, 10);
      if (range.empty() || *endp != '\0' || lo > hi || hi > 16) {
        throw ParseError("bad repetition range in '" + std::string(word) + "'", 0, 0);
      }
      el.min_count = lo;
      el.max_count = hi;
    }
    p.elements_.push_back(el);
  }
  bool anchored = std::any_of(p.elements_.begin(), p.elements_.end(), [](const PatternElement& e) {
    return e.category != Category::Other && e.max_count > 0;
  });
  if (!anchored) throw ParseError("pattern '" + std::string(text) + "' has no vocabulary category", 0, 0);
  for (const auto& e : p.elements_) {
    p.regex_ += category_letter(e.category);
    if (e.min_count != 1 || e.max_count != 1) {
      p.regex_ += "{" + std::to_string(e.min_count) + "," + std::to_string(e.max_count) + "}";
    }
  }
  p.compiled_ = std::make_shared<const std::regex>(p.regex_, std::regex::ECMAScript | std::regex::optimize);
  return p;
}

std::size_t SyntacticPattern::max_gap() const {
  std::size_t gap = 0;
  for (const auto& e : elements_) {
    if (e.category == Category::Other) gap = std::max(gap, e.max_count);
  }
  return gap;
}

std::string SyntacticPattern::to_string() const {
  std::string out;
  for (const auto& e : elements_) {
    if (!out.empty()) out += ' ';
    out += visenrich::to_string(e.category);
    if (e.min_count != 1 || e.max_count != 1) {
      out += "{" + std::to_string(e.min_count) + ".." + std::to_string(e.max_count) + "}";
    }
  }
  return out;
}

std::vector<SyntacticPattern> default_patterns() {
  return {
      SyntacticPattern::parse("COLOR SEM"),
      SyntacticPattern::parse("TEXTURE SEM"),
      SyntacticPattern::parse("SEM SPATIAL SEM"),
      SyntacticPattern::parse("SEM OTHER{0..3} COLOR SEM"),
      SyntacticPattern::parse("COLOR OTHER{0..1} COLOR SEM"),
  };
}

std::vector<SyntacticTerm> apply_patterns(std::span<const TaggedToken> stream,
                                          std::span<const SyntacticPattern> patterns) {
  return prune(match_terms(stream, patterns));
}

FacetVectors term_vectors(const SyntacticTerm& term) {
  FacetVectors v;
  for (const auto& [c, imp] : term.colors) v.color[vocab_index(c)] = imp;
  for (const auto& [t, imp] : term.textures) v.texture[vocab_index(t)] = imp;
  for (const auto& [s, imp] : term.spatials) v.spatial[vocab_index(s)] = imp;
  return v;
}

std::vector<ContextualConcept> assign_impacts(std::span<const TaggedArea> areas) {
  std::vector<ContextualConcept> out;
  for (const auto& area : areas) {
    for (const auto& tok : area.tokens) {
      if (tok.category == Category::Other) continue;
      auto it = std::find_if(out.begin(), out.end(), [&](const ContextualConcept& c) {
        return c.category == tok.category && c.id == tok.id;
      });
      if (it == out.end()) {
        out.push_back(ContextualConcept{tok.category, tok.id, area.base_impact, area.kind});
      } else if (area.base_impact > it->imp) {
        it->imp = area.base_impact;
        it->area = area.kind;
      }
    }
  }
  return out;
}

ContextAnalysis analyze_context(std::span<const ExtractionArea> areas, const Tagger& tagger,
                                std::span<const SyntacticPattern> patterns) {
  std::vector<TaggedArea> tagged;
  tagged.reserve(areas.size());
  for (const auto& area : areas) {
    tagged.push_back(TaggedArea{area.kind, area.base_impact, tagger.tag(area.tokens)});
  }
  ContextAnalysis result;
  result.concepts = assign_impacts(tagged);

  std::vector<AnchoredTerm> terms;
  std::size_t offset = 0;
  for (auto& area : tagged) {
    for (auto& tok : area.tokens) {
      if (tok.category == Category::Other) {
        tok.imp = area.base_impact;
        continue;
      }
      auto it = std::find_if(result.concepts.begin(), result.concepts.end(), [&](const ContextualConcept& c) {
        return c.category == tok.category && c.id == tok.id;
      });
      tok.imp = it->imp;
    }
    for (auto& t : match_terms(area.tokens, patterns)) {
      t.anchor += offset;
      terms.push_back(std::move(t));
    }
    offset += area.tokens.size();
  }
  result.terms = prune(std::move(terms));
  return result;
}

}  // namespace visenrich
