#include "visenrich/lattice.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "visenrich/error.hpp"

namespace visenrich {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view field) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    auto end = field.find(',', start);
    if (end == std::string_view::npos) end = field.size();
    auto item = trim(field.substr(start, end - start));
    if (!item.empty()) out.push_back(to_lower(item));
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view to_string(SemRelation r) {
  switch (r) {
    case SemRelation::Equal: return "equal";
    case SemRelation::Generic: return "generic";
    case SemRelation::Specific: return "specific";
    case SemRelation::Unrelated: return "unrelated";
  }
  return "?";
}

SemanticLattice SemanticLattice::from_taxonomy(std::string_view text) {
  struct Row {
    Concept info;
    std::vector<std::string> parents;
    std::size_t line;
  };
  std::vector<Row> rows;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? line.size() - start : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() > 3) {
      throw ParseError("taxonomy record has more than 3 fields", line_no, 1);
    }
    auto id = to_lower(trim(fields[0]));
    if (id.empty()) throw ParseError("empty concept id", line_no, 1);
    Row row{Concept{id, {}}, {}, line_no};
    if (fields.size() > 1) row.parents = split_list(fields[1]);
    if (fields.size() > 2) row.info.synonyms = split_list(fields[2]);
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw TaxonomyError("no roots: taxonomy declares no concepts");

  SemanticLattice lattice;
  lattice.nodes_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (lattice.by_token_.contains(rows[i].info.id)) {
      throw TaxonomyError("duplicate concept '" + rows[i].info.id + "' on line " +
                          std::to_string(rows[i].line));
    }
    lattice.register_token(rows[i].info.id, i);
    lattice.nodes_.push_back(Node{rows[i].info, {}, {}, 0, {}});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& syn : rows[i].info.synonyms) lattice.register_token(syn, i);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& p : rows[i].parents) {
      auto it = lattice.by_token_.find(p);
      if (it == lattice.by_token_.end()) {
        throw TaxonomyError("dangling parent '" + p + "' of concept '" + rows[i].info.id + "'");
      }
      auto& parents = lattice.nodes_[i].parents;
      if (std::find(parents.begin(), parents.end(), it->second) == parents.end()) {
        parents.push_back(it->second);
        lattice.nodes_[it->second].children.push_back(i);
      }
    }
  }

  // Kahn's algorithm; whatever is left unprocessed sits on or behind a cycle.
  std::vector<std::size_t> pending(lattice.nodes_.size());
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < lattice.nodes_.size(); ++i) {
    pending[i] = lattice.nodes_[i].parents.size();
    if (pending[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop_front();
    order.push_back(n);
    for (auto c : lattice.nodes_[n].children) {
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() != lattice.nodes_.size()) {
    std::string edges;
    for (std::size_t i = 0; i < lattice.nodes_.size(); ++i) {
      if (pending[i] == 0) continue;
      for (auto p : lattice.nodes_[i].parents) {
        if (pending[p] == 0) continue;
        if (!edges.empty()) edges += ", ";
        edges += lattice.nodes_[i].info.id + "->" + lattice.nodes_[p].info.id;
      }
    }
    throw TaxonomyError("cycle detected in is_a edges: " + edges);
  }
  for (auto n : order) lattice.attach(n);
  return lattice;
}

SemanticLattice SemanticLattice::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read taxonomy file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_taxonomy(buf.str());
}

std::string SemanticLattice::to_taxonomy() const {
  std::string out;
  for (const auto& node : nodes_) {
    std::vector<std::string> parent_ids;
    for (auto p : node.parents) parent_ids.push_back(nodes_[p].info.id);
    out += node.info.id;
    out += '\t';
    out += join(parent_ids);
    out += '\t';
    out += join(node.info.synonyms);
    out += '\n';
  }
  return out;
}

void SemanticLattice::register_token(const std::string& token, std::size_t index) {
  auto [it, inserted] = by_token_.emplace(token, index);
  if (!inserted && it->second != index) {
    throw TaxonomyError("token '" + token + "' names both '" + nodes_[it->second].info.id +
                        "' and '" + nodes_[index].info.id + "'");
  }
}

// Parents must already be attached.
void SemanticLattice::attach(std::size_t index) {
  auto& node = nodes_[index];
  node.depth = 0;
  node.ancestors.clear();
  for (auto p : node.parents) {
    const auto& parent = nodes_[p];
    node.depth = std::max(node.depth, parent.depth + 1);
    auto relax = [&node](std::size_t a, int d) {
      auto [it, inserted] = node.ancestors.emplace(a, d);
      if (!inserted && d < it->second) it->second = d;
    };
    relax(p, 1);
    for (const auto& [a, d] : parent.ancestors) relax(a, d + 1);
  }
  longest_path_ = std::max(longest_path_, node.depth);
}

bool SemanticLattice::insert(const Concept& c, std::span<const std::string> parents) {
  auto id = to_lower(c.id);
  if (id.empty()) throw Error("cannot insert a concept with an empty id");
  if (by_token_.contains(id)) return false;
  std::vector<std::string> synonyms;
  for (const auto& s : c.synonyms) {
    auto syn = to_lower(s);
    if (by_token_.contains(syn)) return false;
    if (syn != id && std::find(synonyms.begin(), synonyms.end(), syn) == synonyms.end()) {
      synonyms.push_back(syn);
    }
  }
  std::vector<std::size_t> parent_idx;
  for (const auto& p : parents) {
    auto it = by_token_.find(to_lower(p));
    if (it == by_token_.end()) throw UnknownConceptError(p);
    if (std::find(parent_idx.begin(), parent_idx.end(), it->second) == parent_idx.end()) {
      parent_idx.push_back(it->second);
    }
  }
  // A fresh node has no descendants, so no parent can close a cycle through it.
  const auto index = nodes_.size();
  nodes_.push_back(Node{Concept{id, synonyms}, parent_idx, {}, 0, {}});
  for (auto p : parent_idx) nodes_[p].children.push_back(index);
  by_token_.emplace(id, index);
  for (const auto& s : synonyms) by_token_.emplace(s, index);
  attach(index);
  return true;
}

std::optional<std::string_view> SemanticLattice::resolve(std::string_view token) const {
  auto it = by_token_.find(to_lower(token));
  if (it == by_token_.end()) return std::nullopt;
  return std::string_view(nodes_[it->second].info.id);
}

std::size_t SemanticLattice::index_of(std::string_view token) const {
  auto it = by_token_.find(to_lower(token));
  if (it == by_token_.end()) throw UnknownConceptError(std::string(token));
  return it->second;
}

SemRelation SemanticLattice::relation(std::string_view a, std::string_view b) const {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  if (ia == ib) return SemRelation::Equal;
  if (nodes_[ib].ancestors.contains(ia)) return SemRelation::Generic;
  if (nodes_[ia].ancestors.contains(ib)) return SemRelation::Specific;
  return SemRelation::Unrelated;
}

std::optional<int> SemanticLattice::chain_length(std::string_view a, std::string_view b) const {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  if (ia == ib) return 0;
  if (auto it = nodes_[ib].ancestors.find(ia); it != nodes_[ib].ancestors.end()) return it->second;
  if (auto it = nodes_[ia].ancestors.find(ib); it != nodes_[ia].ancestors.end()) return it->second;
  return std::nullopt;
}

double SemanticLattice::path_length_norm(std::string_view a, std::string_view b) const {
  auto edges = chain_length(a, b);
  if (!edges) {
    throw Error("path_length_norm: '" + std::string(a) + "' and '" + std::string(b) +
                "' are not on a common is_a chain");
  }
  if (*edges == 0 || longest_path_ == 0) return 0.0;
  return std::clamp(static_cast<double>(*edges) / longest_path_, 0.0, 1.0);
}

double SemanticLattice::path_similarity(std::string_view a, std::string_view b) const {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  if (ia == ib) return 1.0;
  std::vector<int> dist(nodes_.size(), -1);
  std::deque<std::size_t> queue{ia};
  dist[ia] = 0;
  while (!queue.empty()) {
    auto n = queue.front();
    queue.pop_front();
    auto visit = [&](std::size_t m) {
      if (dist[m] >= 0) return false;
      dist[m] = dist[n] + 1;
      queue.push_back(m);
      return m == ib;
    };
    for (auto p : nodes_[n].parents) {
      if (visit(p)) return 1.0 / (1.0 + dist[ib]);
    }
    for (auto c : nodes_[n].children) {
      if (visit(c)) return 1.0 / (1.0 + dist[ib]);
    }
  }
  return 0.0;
}

std::vector<std::string> SemanticLattice::ids() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.info.id);
  return out;
}

std::vector<std::string> SemanticLattice::parents(std::string_view id) const {
  std::vector<std::string> out;
  for (auto p : nodes_[index_of(id)].parents) out.push_back(nodes_[p].info.id);
  return out;
}

std::vector<std::string> SemanticLattice::roots() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.parents.empty()) out.push_back(n.info.id);
  }
  return out;
}

bool SemanticLattice::operator==(const SemanticLattice& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].info != other.nodes_[i].info) return false;
    if (nodes_[i].parents != other.nodes_[i].parents) return false;
  }
  return true;
}

}  // namespace visenrich
