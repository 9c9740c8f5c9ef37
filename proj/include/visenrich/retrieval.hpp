#pragma once

// Query parsing, ranking under the four indexing strategies and NDCG
// evaluation against graded relevance judgments.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "visenrich/context.hpp"
#include "visenrich/fusion.hpp"
#include "visenrich/fuzzy.hpp"
#include "visenrich/lattice.hpp"
#include "visenrich/vis.hpp"

namespace visenrich {

enum class Strategy { Vis, Cx, VisCx, TfIdf };

std::string_view to_string(Strategy s);   // "vis" | "cx" | "vis+cx" | "tfidf"
std::optional<Strategy> parse_strategy(std::string_view name);
inline constexpr Strategy kAllStrategies[] = {Strategy::TfIdf, Strategy::Vis, Strategy::Cx, Strategy::VisCx};

struct Query {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;    // tokenize(text)
  std::vector<SyntacticTerm> terms;   // first term is the primary one
};

// Tags and pattern-matches the query like contextual text, every token with
// impact 1. When no pattern matches, a single term is built from the first
// semantic token plus every attribute token. Throws Error("unindexable
// query") when the text holds no vocabulary concept at all.
Query parse_query(std::string_view text, const Tagger& tagger, std::span<const SyntacticPattern> patterns);

// Structure similarity with a syntactic term on both sides.
double term_similarity(const SyntacticTerm& a, const SyntacticTerm& b, const MembershipTable& table,
                       const SemanticLattice& lattice, FacetKernel kernel);

// Bag of stemmed tokens with tf * log(N / df) weights and cosine scoring.
class TfIdfIndex {
 public:
  TfIdfIndex() = default;
  explicit TfIdfIndex(const std::vector<std::vector<std::string>>& documents);

  std::size_t size() const noexcept { return norms_.size(); }
  double idf(std::string_view term) const;
  // Cosine between the query's weighted vector and every document's.
  std::vector<double> scores(std::span<const std::string> query_tokens) const;

 private:
  std::map<std::string, std::size_t, std::less<>> df_;
  std::vector<std::map<std::string, double, std::less<>>> weights_;
  std::vector<double> norms_;
};

struct SearchDocument {
  std::string doc_id;
  std::vector<VisRecord> vis;          // as indexed, vsc in canonical form
  std::vector<VisRecord> enriched;     // after fusion; equals vis when not enriched
  std::vector<SyntacticTerm> terms;
  std::vector<WeightedConcept> vis_evidence;   // (vsc, r)
  std::vector<WeightedConcept> cx_evidence;    // (cx, imp)
  std::vector<std::string> tokens;             // stemmed context tokens
};

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const ScoredDoc&) const = default;
};

struct RankedList {
  std::string query_id;
  std::vector<ScoredDoc> entries;   // score descending, ties by doc_id

  bool operator==(const RankedList&) const = default;
};

struct RankingOptions {
  TConorm tconorm = TConorm::ProbabilisticSum;
  FacetKernel kernel = FacetKernel::Max;
};

class SearchIndex {
 public:
  // `lattice` must contain every concept the documents refer to.
  SearchIndex(SemanticLattice lattice, std::vector<SyntacticPattern> patterns, RankingOptions options,
              std::vector<SearchDocument> documents);

  const SemanticLattice& lattice() const { return *lattice_; }
  const std::vector<SearchDocument>& documents() const { return documents_; }
  bool contains(std::string_view doc_id) const;

  Query parse(std::string_view text, std::string id = {}) const;

  // Score of one document: for every query term, the best similarity among
  // the strategy's items (original records, syntactic terms or enriched
  // records), summed over the query terms.
  double score(const Query& query, const SearchDocument& doc, Strategy strategy) const;

  // Documents with a positive score, best first, at most k of them (k = 0
  // keeps all). Scores are computed in parallel over documents.
  RankedList rank(const Query& query, Strategy strategy, std::size_t k) const;

 private:
  MembershipTable table_for(const Query& query, const SearchDocument& doc, Strategy strategy) const;
  std::vector<double> all_scores(const Query& query, Strategy strategy, bool parallel) const;
  friend RankedList serial_rank(const SearchIndex&, const Query&, Strategy, std::size_t);

  std::unique_ptr<SemanticLattice> lattice_;
  std::unique_ptr<Tagger> tagger_;
  std::vector<SyntacticPattern> patterns_;
  RankingOptions options_;
  std::vector<SearchDocument> documents_;
  TfIdfIndex tfidf_;
};

// Same result as SearchIndex::rank, one document after the other.
RankedList serial_rank(const SearchIndex& index, const Query& query, Strategy strategy, std::size_t k);

// query id -> doc id -> grade
using Qrels = std::map<std::string, std::map<std::string, int>, std::less<>>;

struct QueryText {
  std::string id;
  std::string text;

  bool operator==(const QueryText&) const = default;
};

// `id <TAB> text` per line; '#' lines and blank lines skipped.
std::vector<QueryText> read_queries(std::istream& in);
// `query_id <TAB> doc_id <TAB> grade` per line.
Qrels read_qrels(std::istream& in);

// Normalized DCG over the first n entries, gains 2^grade - 1 and discount
// log2(i + 1). The ideal ordering is taken over every judged document of the
// query; a query without relevant documents scores 0. Throws RangeError for
// n < 1.
double ndcg_at_n(const RankedList& list, const Qrels& qrels, int n);

struct EvalCell {
  Strategy strategy;
  int n = 0;
  double mean_ndcg = 0.0;
};

struct QueryScore {
  std::string query_id;
  Strategy strategy;
  int n = 0;
  double ndcg = 0.0;
};

struct EvalReport {
  std::vector<EvalCell> summary;        // strategy-major, n ascending within
  std::vector<QueryScore> per_query;
  std::vector<std::string> warnings;
  std::size_t evaluated_queries = 0;

  double mean(Strategy s, int n) const;
};

// Queries without judgments or without any vocabulary concept are skipped
// with a warning; judgments for documents missing from the index are dropped
// with a warning.
EvalReport eval_report(const SearchIndex& index, std::span<const QueryText> queries, const Qrels& qrels,
                       std::span<const Strategy> strategies, std::span<const int> ns);

// `strategy <TAB> n <TAB> mean_ndcg` with a header row.
std::string summary_table(const EvalReport& report);
// `query_id <TAB> strategy <TAB> n <TAB> ndcg` with a header row.
std::string per_query_table(const EvalReport& report);

}  // namespace visenrich
