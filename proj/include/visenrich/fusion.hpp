#pragma once

// Matching syntactic terms against visual index structures and fusing the
// best pairs into enriched records.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "visenrich/context.hpp"
#include "visenrich/fuzzy.hpp"
#include "visenrich/lattice.hpp"
#include "visenrich/vis.hpp"

namespace visenrich {

// Per-entry combination used in the facet sums.
enum class FacetKernel { Max, Min, Product };

std::string_view to_string(FacetKernel k);
std::optional<FacetKernel> parse_kernel(std::string_view name);

struct FusionConfig {
  double t_mu = 0.1;
  double t_sim = 0.05;
  FacetKernel kernel = FacetKernel::Max;
  // Literal correction: when the two memberships differ by more than t_mu,
  // keep vsc if mu(vsc) < mu(cx), else install cx.
  bool literal_correction = false;

  bool operator==(const FusionConfig&) const = default;
};

void validate(const FusionConfig& config);

// Sum over texture, spatial and color of sum_j kernel(a[j], b[j]) / 11.
double facet_similarity(const FacetVectors& a, const FacetVectors& b, FacetKernel kernel);

// path_similarity(a, b) * (mu_a + mu_b); 0 when either concept is unknown to
// the lattice.
double semantic_similarity(const SemanticLattice& lattice, std::string_view a, double mu_a, std::string_view b,
                           double mu_b);

// Facet sums plus eps(vsc, cx) * (mu_tot(vsc) + mu_tot(cx)). A term without a
// head contributes facet sums only. Throws UnknownConceptError when either
// semantic concept is missing from the table.
double structure_similarity(const SyntacticTerm& term, const VisRecord& vis, const MembershipTable& table,
                            const SemanticLattice& lattice, FacetKernel kernel);

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }   // syntactic terms
  std::size_t cols() const noexcept { return cols_; }   // visual records
  double& operator()(std::size_t i, std::size_t k) { return values_[i * cols_ + k]; }
  double operator()(std::size_t i, std::size_t k) const { return values_[i * cols_ + k]; }

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// All term/record similarities; rows computed in parallel.
SimilarityMatrix similarity_matrix(std::span<const SyntacticTerm> terms, std::span<const VisRecord> records,
                                   const MembershipTable& table, const SemanticLattice& lattice,
                                   FacetKernel kernel);

namespace serial {

SimilarityMatrix similarity_matrix(std::span<const SyntacticTerm> terms, std::span<const VisRecord> records,
                                   const MembershipTable& table, const SemanticLattice& lattice,
                                   FacetKernel kernel);

}  // namespace serial

struct CorrespondencePair {
  std::size_t term = 0;
  std::size_t vis = 0;
  double sim = 0.0;

  bool operator==(const CorrespondencePair&) const = default;
};

inline constexpr double kTieTolerance = 1e-9;

// For each record column, the best-scoring term if it reaches t_sim. Scores
// within kTieTolerance of the maximum tie; ties go to the larger head impact
// (terms without a head count as 0), then to the lower term index.
std::vector<CorrespondencePair> best_correspondences(const SimilarityMatrix& matrix,
                                                     std::span<const double> head_imps,
                                                     const FusionConfig& config);

enum class Provenance { Kept, Replaced, Corrected };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view name);

struct EnrichedVisRecord {
  VisRecord record;               // vsc holds the chosen concept
  std::string original_vsc;
  double final_mu = 0.0;
  Provenance provenance = Provenance::Kept;
  std::optional<std::size_t> matched_term;
  std::string cx;                 // head of the matched term, empty if none
  double mu_vsc = 0.0;            // mu_tot(original vsc)
  double mu_cx = 0.0;             // mu_tot(cx), 0 if none
  double sim = 0.0;
  std::string branch;             // rule that decided the outcome

  bool operator==(const EnrichedVisRecord&) const = default;
};

// Decides whether the term's concept replaces the record's and records why.
EnrichedVisRecord fuse(const CorrespondencePair& pair, const VisRecord& vis, const SyntacticTerm& term,
                       const MembershipTable& table, const SemanticLattice& lattice, const FusionConfig& config);

// Record with no accepted correspondence.
EnrichedVisRecord pass_through(const VisRecord& vis, const MembershipTable& table);

// Similarity matrix, best correspondences and fusion for one document; the
// output follows the order of `records`.
std::vector<EnrichedVisRecord> enrich_records(std::span<const VisRecord> records,
                                              std::span<const SyntacticTerm> terms,
                                              const MembershipTable& table, const SemanticLattice& lattice,
                                              const FusionConfig& config);

}  // namespace visenrich
