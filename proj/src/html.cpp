// Web page scanning: image attributes and nearby text blocks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>

#include "visenrich/context.hpp"
#include "visenrich/lattice.hpp"

namespace visenrich {

namespace {

constexpr std::array<std::string_view, 36> kBlockTags{
    "address", "article", "aside", "blockquote", "body", "br", "caption", "dd", "div", "dl",
    "dt", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "head", "header", "hr", "html", "li", "main", "nav", "ol", "p",
    "section", "table", "td", "th", "tr", "ul"};

constexpr std::array<std::string_view, 4> kRawTextTags{"script", "style", "noscript", "template"};

bool contains(auto const& list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Decodes the entity starting at s[i] == '&'; returns characters consumed (0
// if it is not an entity we know).
std::size_t decode_entity(std::string_view s, std::size_t i, std::string& out) {
  static const std::map<std::string_view, std::string_view> named{
      {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", " "}};
  auto semi = s.find(';', i);
  if (semi == std::string_view::npos || semi - i > 10) return 0;
  auto body = s.substr(i + 1, semi - i - 1);
  if (body.size() > 1 && body[0] == '#') {
    std::uint32_t cp = 0;
    bool hex = body[1] == 'x' || body[1] == 'X';
    auto digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) return 0;
    for (char c : digits) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else return 0;
      cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
      if (cp > 0x10FFFF) return 0;
    }
    append_utf8(out, cp);
    return semi - i + 1;
  }
  auto it = named.find(body);
  if (it == named.end()) return 0;
  out += it->second;
  return semi - i + 1;
}

std::string decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      if (auto n = decode_entity(s, i, out)) {
        i += n;
        continue;
      }
    }
    out += s[i++];
  }
  return out;
}

struct ImageTag {
  std::size_t begin;
  std::size_t end;
  std::map<std::string, std::string> attrs;
};

struct TextBlock {
  std::size_t begin;
  std::size_t end;
  std::string text;
};

struct ScannedPage {
  std::vector<ImageTag> images;
  std::vector<TextBlock> blocks;
};

ScannedPage scan(std::string_view html) {
  ScannedPage page;
  TextBlock current{0, 0, {}};
  bool has_text = false;
  auto flush = [&] {
    if (has_text) page.blocks.push_back(current);
    current = TextBlock{0, 0, {}};
    has_text = false;
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      auto start = i;
      std::string decoded;
      if (html[i] == '&') {
        if (auto n = decode_entity(html, i, decoded)) {
          i += n;
        } else {
          decoded = "&";
          ++i;
        }
      } else {
        decoded = html[i++];
      }
      if (!has_text) {
        bool blank = std::all_of(decoded.begin(), decoded.end(), is_space);
        if (blank) continue;
        current.begin = start;
        has_text = true;
      }
      current.text += decoded;
      if (!std::all_of(decoded.begin(), decoded.end(), is_space)) current.end = i - 1;
      continue;
    }

    if (html.substr(i, 4) == "<!--") {
      auto close = html.find("-->", i + 4);
      i = close == std::string_view::npos ? html.size() : close + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      auto close = html.find('>', i);
      i = close == std::string_view::npos ? html.size() : close + 1;
      continue;
    }

    const auto tag_begin = i;
    std::size_t j = i + 1;
    bool closing = j < html.size() && html[j] == '/';
    if (closing) ++j;
    auto name_start = j;
    while (j < html.size() && !is_space(html[j]) && html[j] != '>' && html[j] != '/') ++j;
    auto name = to_lower(html.substr(name_start, j - name_start));
    if (name.empty()) {
      // A stray '<' in text.
      if (!has_text) {
        current.begin = i;
        has_text = true;
      }
      current.text += '<';
      current.end = i;
      ++i;
      continue;
    }

    std::map<std::string, std::string> attrs;
    while (j < html.size() && html[j] != '>') {
      if (is_space(html[j]) || html[j] == '/') {
        ++j;
        continue;
      }
      auto an_start = j;
      while (j < html.size() && !is_space(html[j]) && html[j] != '=' && html[j] != '>' && html[j] != '/') ++j;
      auto attr_name = to_lower(html.substr(an_start, j - an_start));
      while (j < html.size() && is_space(html[j])) ++j;
      std::string value;
      if (j < html.size() && html[j] == '=') {
        ++j;
        while (j < html.size() && is_space(html[j])) ++j;
        if (j < html.size() && (html[j] == '"' || html[j] == '\'')) {
          char quote = html[j++];
          auto close = html.find(quote, j);
          if (close == std::string_view::npos) close = html.size();
          value = decode(html.substr(j, close - j));
          j = std::min(close + 1, html.size());
        } else {
          auto v_start = j;
          while (j < html.size() && !is_space(html[j]) && html[j] != '>') ++j;
          value = decode(html.substr(v_start, j - v_start));
        }
      }
      if (!attr_name.empty()) attrs.emplace(attr_name, value);
    }
    const auto tag_end = std::min(j, html.size() - 1);
    i = j < html.size() ? j + 1 : html.size();

    if (!closing && contains(kRawTextTags, name)) {
      auto close = html.find("</" + name, i);
      if (close == std::string_view::npos) {
        close = html.size();
        i = close;
      } else {
        auto gt = html.find('>', close);
        i = gt == std::string_view::npos ? html.size() : gt + 1;
      }
      continue;
    }
    if (contains(kBlockTags, name)) {
      flush();
    } else if (name == "img" && !closing) {
      page.images.push_back(ImageTag{tag_begin, tag_end, std::move(attrs)});
      if (has_text) current.text += ' ';
    } else if (has_text) {
      // Inline tags keep the block open but still separate words.
      current.text += ' ';
    }
  }
  flush();
  return page;
}

std::string_view basename(std::string_view path) {
  auto cut = path.find_first_of("?#");
  if (cut != std::string_view::npos) path = path.substr(0, cut);
  auto slash = path.find_last_of("/\\");
  return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

std::string_view file_stem(std::string_view path) {
  auto base = basename(path);
  auto dot = base.rfind('.');
  return dot == std::string_view::npos || dot == 0 ? base : base.substr(0, dot);
}

bool image_matches(std::string_view src, std::string_view ref) {
  if (ref.empty()) return true;
  return src == ref || basename(src) == basename(ref) || file_stem(src) == file_stem(ref);
}

}  // namespace

std::string_view to_string(AreaKind kind) {
  switch (kind) {
    case AreaKind::AltAttribute: return "alt";
    case AreaKind::SrcTokens: return "src";
    case AreaKind::SurroundingText: return "surrounding";
  }
  return "?";
}

std::optional<AreaKind> parse_area_kind(std::string_view name) {
  if (name == "alt") return AreaKind::AltAttribute;
  if (name == "src") return AreaKind::SrcTokens;
  if (name == "surrounding") return AreaKind::SurroundingText;
  return std::nullopt;
}

double ImpactConfig::for_kind(AreaKind kind) const {
  switch (kind) {
    case AreaKind::AltAttribute: return alt;
    case AreaKind::SrcTokens: return src;
    case AreaKind::SurroundingText: return surrounding;
  }
  return 0.0;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string word;
  auto emit = [&] {
    if (!word.empty() && !std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      tokens.push_back(word);
    }
    word.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      word += ch;
    } else if (c >= 'A' && c <= 'Z') {
      word += static_cast<char>(c - 'A' + 'a');
    } else {
      emit();
    }
  }
  emit();
  return tokens;
}

std::vector<std::string> fold_candidates(std::string_view token) {
  std::vector<std::string> out{std::string(token)};
  auto add = [&out](std::string s) {
    if (s.size() >= 2 && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  auto ends = [&token](std::string_view suffix) {
    return token.size() > suffix.size() && token.substr(token.size() - suffix.size()) == suffix;
  };
  if (ends("ies")) add(std::string(token.substr(0, token.size() - 3)) + "y");
  if (ends("es")) add(std::string(token.substr(0, token.size() - 2)));
  if (ends("s") && !ends("ss")) add(std::string(token.substr(0, token.size() - 1)));
  return out;
}

std::string stem(std::string_view token) {
  auto ends = [&token](std::string_view suffix) {
    return token.size() > suffix.size() + 1 && token.substr(token.size() - suffix.size()) == suffix;
  };
  if (ends("ies")) return std::string(token.substr(0, token.size() - 3)) + "y";
  if (ends("sses")) return std::string(token.substr(0, token.size() - 2));
  if (ends("s") && !ends("ss") && !ends("us")) return std::string(token.substr(0, token.size() - 1));
  return std::string(token);
}

std::vector<ExtractionArea> extract_areas(std::string_view html, std::string_view image_ref,
                                          const ExtractionOptions& options,
                                          std::vector<std::string>* warnings) {
  auto page = scan(html);
  auto img = std::find_if(page.images.begin(), page.images.end(), [&](const ImageTag& tag) {
    auto src = tag.attrs.find("src");
    return image_matches(src == tag.attrs.end() ? std::string_view{} : std::string_view(src->second), image_ref);
  });
  if (img == page.images.end()) {
    if (warnings) warnings->push_back("image '" + std::string(image_ref) + "' not found in page");
    return {};
  }

  std::vector<ExtractionArea> areas;
  if (auto alt = img->attrs.find("alt"); alt != img->attrs.end()) {
    auto tokens = tokenize(alt->second);
    if (!tokens.empty()) {
      areas.push_back({AreaKind::AltAttribute, std::move(tokens), options.impacts.alt});
    }
  }
  if (auto src = img->attrs.find("src"); src != img->attrs.end()) {
    auto tokens = tokenize(file_stem(src->second));
    if (!tokens.empty()) {
      areas.push_back({AreaKind::SrcTokens, std::move(tokens), options.impacts.src});
    }
  }

  std::vector<std::string> nearby;
  for (const auto& block : page.blocks) {
    std::size_t gap = 0;
    if (block.begin > img->end) gap = block.begin - img->end;
    else if (img->begin > block.end) gap = img->begin - block.end;
    if (gap > options.window) continue;
    for (auto& t : tokenize(block.text)) nearby.push_back(std::move(t));
  }
  if (!nearby.empty()) {
    areas.push_back({AreaKind::SurroundingText, std::move(nearby), options.impacts.surrounding});
  }
  return areas;
}

}  // namespace visenrich
