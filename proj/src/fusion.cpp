#include "visenrich/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "visenrich/error.hpp"

namespace visenrich {

namespace {

// Slack on the |mu(vsc) - mu(cx)| <= t_mu comparison so that differences
// such as 0.8 - 0.7 land on the side their decimal values suggest.
constexpr double kThresholdSlack = 1e-12;

double kernel_value(FacetKernel k, double a, double b) {
  switch (k) {
    case FacetKernel::Max: return std::max(a, b);
    case FacetKernel::Min: return std::min(a, b);
    case FacetKernel::Product: return a * b;
  }
  return 0.0;
}

double facet_sum(const FacetVector& a, const FacetVector& b, FacetKernel k) {
  double sum = 0.0;
  for (std::size_t j = 0; j < kVocabSize; ++j) sum += kernel_value(k, a[j], b[j]);
  return sum / static_cast<double>(kVocabSize);
}

std::string canonical(const SemanticLattice& lattice, const std::string& id) {
  auto r = lattice.resolve(id);
  if (!r) throw UnknownConceptError(id);
  return std::string(*r);
}

void check_matrix_inputs(std::span<const SyntacticTerm> terms, std::span<const VisRecord> records,
                         const MembershipTable& table, const SemanticLattice& lattice) {
  for (const auto& t : terms) {
    if (t.head) table.mu_tot(canonical(lattice, t.head->id));
  }
  for (const auto& r : records) table.mu_tot(canonical(lattice, r.vsc));
}

}  // namespace

std::string_view to_string(FacetKernel k) {
  switch (k) {
    case FacetKernel::Max: return "max";
    case FacetKernel::Min: return "min";
    case FacetKernel::Product: return "product";
  }
  return "?";
}

std::optional<FacetKernel> parse_kernel(std::string_view name) {
  if (name == "max") return FacetKernel::Max;
  if (name == "min") return FacetKernel::Min;
  if (name == "product") return FacetKernel::Product;
  return std::nullopt;
}

void validate(const FusionConfig& config) {
  if (!(config.t_mu >= 0.0 && config.t_mu <= 1.0)) throw RangeError("t_mu outside [0,1]");
  if (!(config.t_sim >= 0.0) || !std::isfinite(config.t_sim)) throw RangeError("t_sim must be a finite value >= 0");
}

double facet_similarity(const FacetVectors& a, const FacetVectors& b, FacetKernel kernel) {
  return facet_sum(a.texture, b.texture, kernel) + facet_sum(a.spatial, b.spatial, kernel) +
         facet_sum(a.color, b.color, kernel);
}

double semantic_similarity(const SemanticLattice& lattice, std::string_view a, double mu_a, std::string_view b,
                           double mu_b) {
  if (!lattice.contains(a) || !lattice.contains(b)) return 0.0;
  return lattice.path_similarity(a, b) * (mu_a + mu_b);
}

double structure_similarity(const SyntacticTerm& term, const VisRecord& vis, const MembershipTable& table,
                            const SemanticLattice& lattice, FacetKernel kernel) {
  double sim = facet_similarity(term_vectors(term), facet_vectors(vis), kernel);
  if (!term.head) return sim;
  const auto vsc = canonical(lattice, vis.vsc);
  const auto cx = canonical(lattice, term.head->id);
  return sim + lattice.path_similarity(vsc, cx) * (table.mu_tot(vsc) + table.mu_tot(cx));
}

SimilarityMatrix similarity_matrix(std::span<const SyntacticTerm> terms, std::span<const VisRecord> records,
                                   const MembershipTable& table, const SemanticLattice& lattice,
                                   FacetKernel kernel) {
  check_matrix_inputs(terms, records, table, lattice);
  SimilarityMatrix m(terms.size(), records.size());
  const auto cells = static_cast<long>(terms.size() * records.size());
#pragma omp parallel for schedule(static) if (cells > 256)
  for (long cell = 0; cell < cells; ++cell) {
    const auto i = static_cast<std::size_t>(cell) / records.size();
    const auto k = static_cast<std::size_t>(cell) % records.size();
    m(i, k) = structure_similarity(terms[i], records[k], table, lattice, kernel);
  }
  return m;
}

namespace serial {

SimilarityMatrix similarity_matrix(std::span<const SyntacticTerm> terms, std::span<const VisRecord> records,
                                   const MembershipTable& table, const SemanticLattice& lattice,
                                   FacetKernel kernel) {
  check_matrix_inputs(terms, records, table, lattice);
  SimilarityMatrix m(terms.size(), records.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t k = 0; k < records.size(); ++k) {
      m(i, k) = structure_similarity(terms[i], records[k], table, lattice, kernel);
    }
  }
  return m;
}

}  // namespace serial

std::vector<CorrespondencePair> best_correspondences(const SimilarityMatrix& matrix,
                                                     std::span<const double> head_imps,
                                                     const FusionConfig& config) {
  if (head_imps.size() != matrix.rows()) throw Error("best_correspondences: one head impact per term expected");
  std::vector<CorrespondencePair> pairs;
  for (std::size_t k = 0; k < matrix.cols(); ++k) {
    if (matrix.rows() == 0) break;
    double top = matrix(0, k);
    for (std::size_t i = 1; i < matrix.rows(); ++i) top = std::max(top, matrix(i, k));
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      if (matrix(i, k) < top - kTieTolerance) continue;
      if (!best || head_imps[i] > head_imps[*best]) best = i;
    }
    if (matrix(*best, k) >= config.t_sim) pairs.push_back({*best, k, matrix(*best, k)});
  }
  return pairs;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Kept: return "kept";
    case Provenance::Replaced: return "replaced";
    case Provenance::Corrected: return "corrected";
  }
  return "?";
}

std::optional<Provenance> parse_provenance(std::string_view name) {
  if (name == "kept") return Provenance::Kept;
  if (name == "replaced") return Provenance::Replaced;
  if (name == "corrected") return Provenance::Corrected;
  return std::nullopt;
}

EnrichedVisRecord pass_through(const VisRecord& vis, const MembershipTable& table) {
  EnrichedVisRecord out;
  out.record = vis;
  out.original_vsc = vis.vsc;
  out.mu_vsc = table.mu_tot(vis.vsc);
  out.final_mu = out.mu_vsc;
  out.provenance = Provenance::Kept;
  out.branch = "unmatched";
  return out;
}

EnrichedVisRecord fuse(const CorrespondencePair& pair, const VisRecord& vis, const SyntacticTerm& term,
                       const MembershipTable& table, const SemanticLattice& lattice, const FusionConfig& config) {
  EnrichedVisRecord out;
  out.record = vis;
  out.original_vsc = vis.vsc;
  out.matched_term = pair.term;
  out.sim = pair.sim;

  const auto vsc = canonical(lattice, vis.vsc);
  out.mu_vsc = table.mu_tot(vsc);
  if (!term.head) {
    out.final_mu = out.mu_vsc;
    out.provenance = Provenance::Kept;
    out.branch = "no-head";
    return out;
  }
  const auto cx = canonical(lattice, term.head->id);
  out.cx = cx;
  out.mu_cx = table.mu_tot(cx);
  out.final_mu = std::max(out.mu_vsc, out.mu_cx);

  auto install = [&](Provenance p, const char* branch) {
    out.record.vsc = cx;
    out.provenance = p;
    out.branch = branch;
  };
  auto keep = [&](const char* branch) {
    out.provenance = Provenance::Kept;
    out.branch = branch;
  };

  const double diff = out.mu_vsc - out.mu_cx;
  if (std::abs(diff) <= config.t_mu + kThresholdSlack) {
    switch (lattice.relation(cx, vsc)) {
      case SemRelation::Equal: keep("equal"); break;
      case SemRelation::Specific: install(Provenance::Replaced, "specialized"); break;
      case SemRelation::Generic: keep("vsc-more-specific"); break;
      case SemRelation::Unrelated: keep("unrelated"); break;
    }
  } else if (config.literal_correction) {
    if (diff < 0) keep("literal-kept");
    else install(Provenance::Corrected, "literal-corrected");
  } else {
    if (out.mu_cx > out.mu_vsc) install(Provenance::Corrected, "corrected");
    else keep("correction-kept");
  }
  return out;
}

std::vector<EnrichedVisRecord> enrich_records(std::span<const VisRecord> records,
                                              std::span<const SyntacticTerm> terms,
                                              const MembershipTable& table, const SemanticLattice& lattice,
                                              const FusionConfig& config) {
  validate(config);
  auto matrix = similarity_matrix(terms, records, table, lattice, config.kernel);
  std::vector<double> head_imps;
  head_imps.reserve(terms.size());
  for (const auto& t : terms) head_imps.push_back(t.head ? t.head->value : 0.0);
  auto pairs = best_correspondences(matrix, head_imps, config);

  std::vector<EnrichedVisRecord> out;
  out.reserve(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    auto it = std::find_if(pairs.begin(), pairs.end(), [k](const CorrespondencePair& p) { return p.vis == k; });
    if (it == pairs.end()) {
      auto rec = pass_through(records[k], table);
      out.push_back(std::move(rec));
    } else {
      out.push_back(fuse(*it, records[k], terms[it->term], table, lattice, config));
    }
  }
  return out;
}

}  // namespace visenrich
