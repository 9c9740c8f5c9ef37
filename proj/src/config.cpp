#include "visenrich/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "visenrich/error.hpp"

namespace visenrich {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view v, std::size_t line, std::string_view key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'", line, 1);
  }
  return out;
}

long parse_int(std::string_view v, std::size_t line, std::string_view key) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("'" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'", line, 1);
  }
  return out;
}

std::filesystem::path resolve_path(std::string_view v, const std::filesystem::path& base) {
  std::filesystem::path p{std::string(v)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto end = s.find(sep, start);
    auto piece = trim(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

void check_unit(double v, const char* key) {
  if (!(v >= 0.0 && v <= 1.0)) throw RangeError(std::string(key) + " outside [0,1]");
}

}  // namespace

void validate(const PipelineConfig& c) {
  check_unit(c.extraction.impacts.alt, "impact.alt");
  check_unit(c.extraction.impacts.src, "impact.src");
  check_unit(c.extraction.impacts.surrounding, "impact.surrounding");
  validate(c.fusion);
  if (c.patterns.empty()) throw RangeError("patterns: at least one pattern required");
  if (c.ndcg_n.empty()) throw RangeError("ndcg_n: at least one cutoff required");
  for (int n : c.ndcg_n) {
    if (n <= 0) throw RangeError("ndcg_n: cutoffs must be >= 1");
  }
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, 1);
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (value.empty() && key != "knowledge") {
      throw ParseError("missing value for '" + std::string(key) + "'", line_no, eq + 2);
    }

    if (key == "taxonomy") {
      c.taxonomy = resolve_path(value, base_dir);
    } else if (key == "knowledge") {
      c.knowledge = value.empty() ? std::filesystem::path{} : resolve_path(value, base_dir);
    } else if (key == "impact.alt") {
      c.extraction.impacts.alt = parse_double(value, line_no, key);
    } else if (key == "impact.src") {
      c.extraction.impacts.src = parse_double(value, line_no, key);
    } else if (key == "impact.surrounding") {
      c.extraction.impacts.surrounding = parse_double(value, line_no, key);
    } else if (key == "window") {
      auto w = parse_int(value, line_no, key);
      if (w < 0) throw RangeError("window must be >= 0");
      c.extraction.window = static_cast<std::size_t>(w);
    } else if (key == "patterns") {
      c.patterns.clear();
      for (auto p : split(value, ';')) {
        try {
          c.patterns.push_back(SyntacticPattern::parse(p));
        } catch (const Error& e) {
          throw ParseError(std::string("patterns: ") + e.what(), line_no, 1);
        }
      }
    } else if (key == "tconorm") {
      auto k = parse_tconorm(value);
      if (!k) throw ParseError("tconorm must be max, psum or bsum", line_no, eq + 2);
      c.tconorm = *k;
    } else if (key == "kernel") {
      auto k = parse_kernel(value);
      if (!k) throw ParseError("kernel must be max, min or product", line_no, eq + 2);
      c.fusion.kernel = *k;
    } else if (key == "t_mu") {
      c.fusion.t_mu = parse_double(value, line_no, key);
    } else if (key == "t_sim") {
      c.fusion.t_sim = parse_double(value, line_no, key);
    } else if (key == "fusion_literal") {
      if (value == "true") c.fusion.literal_correction = true;
      else if (value == "false") c.fusion.literal_correction = false;
      else throw ParseError("fusion_literal must be true or false", line_no, eq + 2);
    } else if (key == "ndcg_n") {
      c.ndcg_n.clear();
      for (auto n : split(value, ',')) c.ndcg_n.push_back(static_cast<int>(parse_int(n, line_no, key)));
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no, 1);
    }
  }
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  PipelineConfig c;
  try {
    c = parse_config(buf.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + e.what(), 0, 0);
  }
  if (!c.taxonomy.empty() && !std::filesystem::is_regular_file(c.taxonomy)) {
    throw Error("taxonomy file '" + c.taxonomy.string() + "' does not exist");
  }
  if (!c.knowledge.empty() && !std::filesystem::is_regular_file(c.knowledge)) {
    throw Error("knowledge file '" + c.knowledge.string() + "' does not exist");
  }
  return c;
}

std::string to_config_text(const PipelineConfig& c) {
  std::ostringstream out;
  if (!c.taxonomy.empty()) out << "taxonomy = " << c.taxonomy.string() << '\n';
  if (!c.knowledge.empty()) out << "knowledge = " << c.knowledge.string() << '\n';
  out << "impact.alt = " << format_decimal(c.extraction.impacts.alt) << '\n';
  out << "impact.src = " << format_decimal(c.extraction.impacts.src) << '\n';
  out << "impact.surrounding = " << format_decimal(c.extraction.impacts.surrounding) << '\n';
  out << "window = " << c.extraction.window << '\n';
  out << "patterns = ";
  for (std::size_t i = 0; i < c.patterns.size(); ++i) out << (i ? "; " : "") << c.patterns[i].to_string();
  out << '\n';
  out << "tconorm = " << to_string(c.tconorm) << '\n';
  out << "kernel = " << to_string(c.fusion.kernel) << '\n';
  out << "t_mu = " << format_decimal(c.fusion.t_mu) << '\n';
  out << "t_sim = " << format_decimal(c.fusion.t_sim) << '\n';
  out << "fusion_literal = " << (c.fusion.literal_correction ? "true" : "false") << '\n';
  out << "ndcg_n = ";
  for (std::size_t i = 0; i < c.ndcg_n.size(); ++i) out << (i ? "," : "") << c.ndcg_n[i];
  out << '\n';
  return out.str();
}

}  // namespace visenrich
