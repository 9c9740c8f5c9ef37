#include "visenrich/fuzzy.hpp"

#include <algorithm>

#include "visenrich/error.hpp"

namespace visenrich {

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw RangeError(std::string(what) + " outside [0,1]");
}

void check_inputs(std::span<const WeightedConcept> concepts, const SemanticLattice& lattice) {
  for (const auto& c : concepts) {
    check_unit(c.value, "membership source value");
    if (!lattice.contains(c.id)) throw UnknownConceptError(c.id);
  }
}

double fold(std::string_view c, std::span<const WeightedConcept> sources, const SemanticLattice& lattice,
            TConorm kind) {
  double acc = 0.0;
  for (const auto& s : sources) acc = tconorm(kind, acc, membership(lattice, c, s.id, s.value));
  return acc;
}

void fill_row(MembershipTable& table, std::size_t i, std::span<const WeightedConcept> vis_concepts,
              std::span<const WeightedConcept> cx_concepts, const SemanticLattice& lattice, TConorm kind) {
  const auto& c = table.universe()[i];
  table.vis[i] = fold(c, vis_concepts, lattice, kind);
  table.cx[i] = fold(c, cx_concepts, lattice, kind);
  table.tot[i] = tconorm(kind, table.vis[i], table.cx[i]);
}

MembershipTable prepare(std::span<const std::string> universe, std::span<const WeightedConcept> vis_concepts,
                        std::span<const WeightedConcept> cx_concepts, const SemanticLattice& lattice) {
  check_inputs(vis_concepts, lattice);
  check_inputs(cx_concepts, lattice);
  std::vector<std::string> ids;
  ids.reserve(universe.size());
  for (const auto& u : universe) {
    auto id = lattice.resolve(u);
    if (!id) throw UnknownConceptError(u);
    ids.emplace_back(*id);
  }
  return MembershipTable(std::move(ids));
}

}  // namespace

std::string_view to_string(TConorm kind) {
  switch (kind) {
    case TConorm::Max: return "max";
    case TConorm::ProbabilisticSum: return "psum";
    case TConorm::BoundedSum: return "bsum";
  }
  return "?";
}

std::optional<TConorm> parse_tconorm(std::string_view name) {
  if (name == "max") return TConorm::Max;
  if (name == "psum") return TConorm::ProbabilisticSum;
  if (name == "bsum") return TConorm::BoundedSum;
  return std::nullopt;
}

double tconorm(TConorm kind, double a, double b) {
  check_unit(a, "t-conorm argument");
  check_unit(b, "t-conorm argument");
  switch (kind) {
    case TConorm::Max: return std::max(a, b);
    case TConorm::ProbabilisticSum: return a + b - a * b;
    case TConorm::BoundedSum: return std::min(a + b, 1.0);
  }
  return 0.0;
}

double membership(const SemanticLattice& lattice, std::string_view c, std::string_view source, double value) {
  check_unit(value, "membership source value");
  switch (lattice.relation(c, source)) {
    case SemRelation::Equal:
    case SemRelation::Generic:
      return value;
    case SemRelation::Specific:
      return std::min(value + lattice.path_length_norm(source, c), 1.0);
    case SemRelation::Unrelated:
      return 0.0;
  }
  return 0.0;
}

MembershipTable::MembershipTable(std::vector<std::string> universe)
    : vis(universe.size(), 0.0), cx(universe.size(), 0.0), tot(universe.size(), 0.0), universe_(std::move(universe)) {
  for (std::size_t i = 0; i < universe_.size(); ++i) {
    if (!index_.emplace(universe_[i], i).second) {
      throw Error("membership universe lists '" + universe_[i] + "' twice");
    }
  }
}

std::optional<std::size_t> MembershipTable::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double MembershipTable::mu_tot(std::string_view id) const {
  auto i = find(id);
  if (!i) throw UnknownConceptError(std::string(id));
  return tot[*i];
}

MembershipTable aggregate_mu_tot(std::span<const std::string> universe,
                                 std::span<const WeightedConcept> vis_concepts,
                                 std::span<const WeightedConcept> cx_concepts,
                                 const SemanticLattice& lattice, TConorm kind) {
  auto table = prepare(universe, vis_concepts, cx_concepts, lattice);
  const auto n = static_cast<long>(table.size());
#pragma omp parallel for schedule(static) if (n > 64)
  for (long i = 0; i < n; ++i) {
    fill_row(table, static_cast<std::size_t>(i), vis_concepts, cx_concepts, lattice, kind);
  }
  return table;
}

namespace serial {

MembershipTable aggregate_mu_tot(std::span<const std::string> universe,
                                 std::span<const WeightedConcept> vis_concepts,
                                 std::span<const WeightedConcept> cx_concepts,
                                 const SemanticLattice& lattice, TConorm kind) {
  auto table = prepare(universe, vis_concepts, cx_concepts, lattice);
  for (std::size_t i = 0; i < table.size(); ++i) fill_row(table, i, vis_concepts, cx_concepts, lattice, kind);
  return table;
}

}  // namespace serial

}  // namespace visenrich
