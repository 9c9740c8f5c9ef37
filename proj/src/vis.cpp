#include "visenrich/vis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "visenrich/error.hpp"
#include "visenrich/lattice.hpp"

namespace visenrich {

namespace {

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}

bool is_number_char(char c) {
  return (c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-';
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_blank();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_blank();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(std::string("expected '") + c + "'" + found());
    }
  }

  std::string identifier(std::string_view what) {
    skip_blank();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected " + std::string(what) + found());
    auto start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  double number(std::string_view what) {
    skip_blank();
    auto start = pos_;
    auto line = line_, col = col_;
    while (pos_ < text_.size() && is_number_char(text_[pos_])) advance();
    auto token = text_.substr(start, pos_ - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
      throw ParseError("expected a number for " + std::string(what), line, col);
    }
    last_number_line_ = line;
    last_number_col_ = col;
    return value;
  }

  void check_unit(double value, std::string_view what) const {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw RangeError(std::to_string(last_number_line_) + ":" + std::to_string(last_number_col_) +
                       ": " + std::string(what) + " " + format_decimal(value) + " outside [0,1]");
    }
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, col_); }

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::string found() const {
    if (pos_ >= text_.size()) return ", found end of input";
    return std::string(", found '") + text_[pos_] + "'";
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t last_number_line_ = 0;
  std::size_t last_number_col_ = 0;
};

template <class E>
E vocab_or_fail(Cursor& cur, std::string_view kind) {
  auto line = cur.line(), col = cur.column();
  auto name = to_lower(cur.identifier(kind));
  auto value = parse_vocab<E>(name);
  if (!value) throw ParseError("unknown " + std::string(kind) + " '" + name + "'", line, col);
  return *value;
}

// Parses `name=weight, ...;` (possibly empty) into `out`.
template <class E>
void weighted_list(Cursor& cur, std::map<E, double>& out, std::string_view kind, bool bare_allowed) {
  if (cur.accept(';')) return;
  while (true) {
    auto line = cur.line(), col = cur.column();
    auto key = vocab_or_fail<E>(cur, kind);
    double weight = 1.0;
    if (cur.accept('=')) {
      weight = cur.number(kind);
      cur.check_unit(weight, std::string(kind) + " weight");
    } else if (!bare_allowed) {
      cur.expect('=');
    }
    if (!out.emplace(key, weight).second) {
      throw ParseError("duplicate " + std::string(kind) + " '" + std::string(vocab_name(key)) + "'", line, col);
    }
    if (cur.accept(';')) return;
    cur.expect(',');
  }
}

VisRecord parse_record(Cursor& cur) {
  VisRecord rec;
  auto kw_line = cur.line(), kw_col = cur.column();
  if (cur.identifier("'vis'") != "vis") throw ParseError("expected 'vis'", kw_line, kw_col);
  rec.vo_id = cur.identifier("visual object id");
  cur.expect('{');

  static constexpr std::array<std::string_view, 4> kFacets{"sem", "color", "texture", "spa"};
  int last = -1;
  while (!cur.accept('}')) {
    auto line = cur.line(), col = cur.column();
    if (cur.at_end()) cur.fail("unterminated record '" + rec.vo_id + "'");
    auto facet = cur.identifier("facet name");
    auto it = std::find(kFacets.begin(), kFacets.end(), facet);
    if (it == kFacets.end()) throw ParseError("unknown facet '" + facet + "'", line, col);
    int idx = static_cast<int>(it - kFacets.begin());
    if (last < 0 && idx != 0) throw ParseError("facet 'sem' must come first", line, col);
    if (idx <= last) throw ParseError("facet '" + facet + "' repeated or out of order", line, col);
    last = idx;
    cur.expect(':');
    switch (idx) {
      case 0: {
        rec.vsc = to_lower(cur.identifier("semantic concept"));
        cur.expect('@');
        rec.r_vsc = cur.number("recognition probability");
        cur.check_unit(rec.r_vsc, "recognition probability");
        cur.expect(';');
        break;
      }
      case 1:
        weighted_list<Color>(cur, rec.colors, "color", false);
        break;
      case 2:
        weighted_list<Texture>(cur, rec.textures, "texture", true);
        break;
      case 3: {
        if (cur.accept(';')) break;
        while (true) {
          auto rel_line = cur.line(), rel_col = cur.column();
          auto rel = vocab_or_fail<SpatialRelation>(cur, "spatial relation");
          cur.expect('(');
          auto target = cur.identifier("target visual object id");
          cur.expect(')');
          SpatialLink link{rel, target};
          if (std::find(rec.spatial.begin(), rec.spatial.end(), link) != rec.spatial.end()) {
            throw ParseError("duplicate spatial relation", rel_line, rel_col);
          }
          rec.spatial.push_back(std::move(link));
          if (cur.accept(';')) break;
          cur.expect(',');
        }
        break;
      }
    }
  }
  if (last < 0) throw ParseError("record '" + rec.vo_id + "' has no 'sem' facet", kw_line, kw_col);
  std::sort(rec.spatial.begin(), rec.spatial.end());
  validate(rec);
  return rec;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

void validate(const VisRecord& r) {
  if (r.vo_id.empty()) throw Error("visual object id is empty");
  if (r.vsc.empty()) throw Error("record '" + r.vo_id + "' has no semantic concept");
  if (!(r.r_vsc >= 0.0 && r.r_vsc <= 1.0)) {
    throw RangeError("record '" + r.vo_id + "': recognition probability outside [0,1]");
  }
  double color_sum = 0.0;
  for (const auto& [c, w] : r.colors) {
    if (!(w >= 0.0 && w <= 1.0)) throw RangeError("record '" + r.vo_id + "': color weight outside [0,1]");
    color_sum += w;
  }
  if (color_sum > 1.0 + 1e-9) throw RangeError("record '" + r.vo_id + "': color weights sum above 1");
  for (const auto& [t, w] : r.textures) {
    if (!(w >= 0.0 && w <= 1.0)) throw RangeError("record '" + r.vo_id + "': texture weight outside [0,1]");
  }
  for (std::size_t i = 1; i < r.spatial.size(); ++i) {
    if (!(r.spatial[i - 1] < r.spatial[i])) {
      throw Error("record '" + r.vo_id + "': spatial relations unsorted or duplicated");
    }
  }
}

void validate_document(std::span<const VisRecord> records) {
  std::set<std::string> ids;
  for (const auto& r : records) {
    validate(r);
    if (!ids.insert(r.vo_id).second) throw Error("duplicate visual object id '" + r.vo_id + "'");
  }
  for (const auto& r : records) {
    for (const auto& link : r.spatial) {
      if (link.target == r.vo_id) throw Error("record '" + r.vo_id + "' relates to itself");
      if (!ids.contains(link.target)) {
        throw Error("record '" + r.vo_id + "': dangling spatial target '" + link.target + "'");
      }
    }
  }
}

std::vector<VisRecord> parse_vis(std::string_view text) {
  Cursor cur(text);
  std::vector<VisRecord> records;
  while (!cur.at_end()) records.push_back(parse_record(cur));
  validate_document(records);
  return records;
}

std::string format_decimal(double value) {
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  std::string out = ec == std::errc{} ? std::string(buf, ptr) : std::to_string(value);
  auto dot = out.find('.');
  if (dot == std::string::npos) {
    out += ".00";
  } else if (out.size() - dot - 1 < 2) {
    out.append(2 - (out.size() - dot - 1), '0');
  }
  return out;
}

std::string serialize_vis(std::span<const VisRecord> records) {
  validate_document(records);
  std::vector<const VisRecord*> ordered;
  for (const auto& r : records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const VisRecord* a, const VisRecord* b) { return a->vo_id < b->vo_id; });

  std::string out;
  for (const auto* r : ordered) {
    std::vector<std::string> colors, textures, links;
    for (const auto& [c, w] : r->colors) colors.push_back(std::string(vocab_name(c)) + "=" + format_decimal(w));
    for (const auto& [t, w] : r->textures) textures.push_back(std::string(vocab_name(t)) + "=" + format_decimal(w));
    for (const auto& link : r->spatial) {
      links.push_back(std::string(vocab_name(link.relation)) + "(" + link.target + ")");
    }
    out += "vis " + r->vo_id + " { sem: " + r->vsc + "@" + format_decimal(r->r_vsc) + "; ";
    out += "color: " + join(colors) + "; ";
    out += "texture: " + join(textures) + "; ";
    out += "spa: " + join(links) + "; }\n";
  }
  return out;
}

FacetVectors facet_vectors(const VisRecord& record) {
  FacetVectors v;
  for (const auto& [c, w] : record.colors) v.color[vocab_index(c)] = w;
  for (const auto& [t, w] : record.textures) v.texture[vocab_index(t)] = w;
  for (const auto& link : record.spatial) v.spatial[vocab_index(link.relation)] = 1.0;
  return v;
}

}  // namespace visenrich
