#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "synthetic_corpus.hpp"
#include "visenrich/fusion.hpp"
#include "visenrich/fuzzy.hpp"
#include "visenrich/retrieval.hpp"

using namespace visenrich;

namespace {

const SemanticLattice& base() {
  static const auto l = SemanticLattice::load(std::filesystem::path(VISENRICH_DATA_DIR) / "taxonomy.base.tsv");
  return l;
}

// Wide random lattice so the membership universe is large.
const SemanticLattice& wide() {
  static const auto l = [] {
    std::mt19937_64 rng(1);
    return SemanticLattice::from_taxonomy(testing::random_dag(rng, 500).to_taxonomy());
  }();
  return l;
}

std::vector<WeightedConcept> evidence(std::mt19937_64& rng, const std::vector<std::string>& ids, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<WeightedConcept> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({ids[rng() % ids.size()], u(rng)});
  return out;
}

template <bool Parallel>
void BM_AggregateMuTot(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto ids = wide().ids();
  const auto vis = evidence(rng, ids, 8);
  const auto cx = evidence(rng, ids, 8);
  for (auto _ : state) {
    auto t = Parallel ? aggregate_mu_tot(ids, vis, cx, wide(), TConorm::ProbabilisticSum)
                      : serial::aggregate_mu_tot(ids, vis, cx, wide(), TConorm::ProbabilisticSum);
    benchmark::DoNotOptimize(t.tot.data());
  }
}

template <bool Parallel>
void BM_SimilarityMatrix(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto ids = base().ids();
  MembershipTable table(ids);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : table.tot) v = u(rng);
  std::vector<SyntacticTerm> terms;
  std::vector<VisRecord> recs;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n; ++i) {
    SyntacticTerm t;
    t.head = WeightedConcept{ids[rng() % ids.size()], 0.9};
    t.colors[static_cast<Color>(rng() % 11)] = u(rng);
    terms.push_back(t);
    recs.push_back(testing::random_vis_record(rng, "v" + std::to_string(i), ids, {}));
  }
  for (auto _ : state) {
    auto m = Parallel ? similarity_matrix(terms, recs, table, base(), FacetKernel::Max)
                      : serial::similarity_matrix(terms, recs, table, base(), FacetKernel::Max);
    benchmark::DoNotOptimize(m);
  }
}

const SearchIndex& corpus_index() {
  static const SearchIndex idx = [] {
    testing::CorpusOptions opts;
    opts.documents = 200;
    auto corpus = testing::generate_corpus(base(), opts);
    std::vector<SearchDocument> docs;
    for (const auto& d : corpus.docs) {
      SearchDocument sd;
      sd.doc_id = d.doc_id;
      sd.vis = parse_vis(d.vis);
      sd.enriched = sd.vis;
      for (const auto& r : sd.vis) sd.vis_evidence.push_back({r.vsc, r.r_vsc});
      for (const auto& o : d.objects) {
        SyntacticTerm t;
        t.head = WeightedConcept{o.truth, 0.9};
        t.colors = o.colors;
        sd.terms.push_back(t);
        sd.cx_evidence.push_back({o.truth, 0.9});
        sd.tokens.push_back(o.truth);
      }
      docs.push_back(std::move(sd));
    }
    return SearchIndex(base(), default_patterns(), RankingOptions{}, std::move(docs));
  }();
  return idx;
}

template <bool Parallel>
void BM_Rank(benchmark::State& state) {
  const auto& idx = corpus_index();
  const auto q = idx.parse("Red Roses near Green Walls");
  for (auto _ : state) {
    auto l = Parallel ? idx.rank(q, Strategy::VisCx, 10) : serial_rank(idx, q, Strategy::VisCx, 10);
    benchmark::DoNotOptimize(l.entries.data());
  }
}

}  // namespace

BENCHMARK(BM_AggregateMuTot<false>)->Name("aggregate_mu_tot/serial");
BENCHMARK(BM_AggregateMuTot<true>)->Name("aggregate_mu_tot/omp");
BENCHMARK(BM_SimilarityMatrix<false>)->Name("similarity_matrix/serial")->Arg(16)->Arg(64);
BENCHMARK(BM_SimilarityMatrix<true>)->Name("similarity_matrix/omp")->Arg(16)->Arg(64);
BENCHMARK(BM_Rank<false>)->Name("rank/serial");
BENCHMARK(BM_Rank<true>)->Name("rank/omp");

BENCHMARK_MAIN();
