#pragma once

// Fuzzy membership of semantic concepts given visual and contextual evidence.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "visenrich/context.hpp"
#include "visenrich/lattice.hpp"

namespace visenrich {

enum class TConorm { Max, ProbabilisticSum, BoundedSum };

std::string_view to_string(TConorm kind);          // "max" | "psum" | "bsum"
std::optional<TConorm> parse_tconorm(std::string_view name);

// Throws RangeError when a or b is outside [0,1].
double tconorm(TConorm kind, double a, double b);

// Shared shape of both membership functions: `value` when c is equal to or
// more generic than `source`, value + normalized chain length (capped at 1)
// when c is more specific, 0 when the two are unrelated.
double membership(const SemanticLattice& lattice, std::string_view c, std::string_view source, double value);

inline double mu_cx(const SemanticLattice& lattice, std::string_view c, std::string_view cx, double imp) {
  return membership(lattice, c, cx, imp);
}

inline double mu_vsc(const SemanticLattice& lattice, std::string_view c, std::string_view vsc, double r) {
  return membership(lattice, c, vsc, r);
}

class MembershipTable {
 public:
  MembershipTable() = default;
  // All values start at 0.
  explicit MembershipTable(std::vector<std::string> universe);

  const std::vector<std::string>& universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return universe_.size(); }

  std::optional<std::size_t> find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id).has_value(); }

  // Aggregated value; throws UnknownConceptError outside the universe.
  double mu_tot(std::string_view id) const;

  std::vector<double> vis;   // mu_tot_vis per universe entry
  std::vector<double> cx;    // mu_tot_cx
  std::vector<double> tot;   // tconorm(vis, cx)

  bool operator==(const MembershipTable& o) const {
    return universe_ == o.universe_ && vis == o.vis && cx == o.cx && tot == o.tot;
  }

 private:
  std::vector<std::string> universe_;
  std::unordered_map<std::string, std::size_t> index_;
};

// For every concept of `universe`: fold membership over the visual concepts
// (vsc, r) and over the contextual ones (cx, imp) with `kind`, left to right
// from 0, then combine the two folds. Runs the universe loop in parallel.
MembershipTable aggregate_mu_tot(std::span<const std::string> universe,
                                 std::span<const WeightedConcept> vis_concepts,
                                 std::span<const WeightedConcept> cx_concepts,
                                 const SemanticLattice& lattice, TConorm kind);

namespace serial {

MembershipTable aggregate_mu_tot(std::span<const std::string> universe,
                                 std::span<const WeightedConcept> vis_concepts,
                                 std::span<const WeightedConcept> cx_concepts,
                                 const SemanticLattice& lattice, TConorm kind);

}  // namespace serial

}  // namespace visenrich
