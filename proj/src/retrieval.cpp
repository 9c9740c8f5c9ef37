#include "visenrich/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <set>
#include <sstream>

#include "visenrich/error.hpp"

namespace visenrich {

namespace {

std::string canonical(const SemanticLattice& lattice, std::string_view id) {
  auto r = lattice.resolve(id);
  if (!r) throw UnknownConceptError(std::string(id));
  return std::string(*r);
}

void add_attribute(SyntacticTerm& t, const TaggedToken& tok) {
  switch (tok.category) {
    case Category::Color:
      if (auto c = parse_vocab<Color>(tok.id)) t.colors[*c] = tok.imp;
      break;
    case Category::Texture:
      if (auto x = parse_vocab<Texture>(tok.id)) t.textures[*x] = tok.imp;
      break;
    case Category::Spatial:
      if (auto s = parse_vocab<SpatialRelation>(tok.id)) t.spatials[*s] = tok.imp;
      break;
    default:
      break;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto end = line.find('\t', start);
    out.push_back(trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Vis: return "vis";
    case Strategy::Cx: return "cx";
    case Strategy::VisCx: return "vis+cx";
    case Strategy::TfIdf: return "tfidf";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "vis") return Strategy::Vis;
  if (name == "cx") return Strategy::Cx;
  if (name == "vis+cx") return Strategy::VisCx;
  if (name == "tfidf") return Strategy::TfIdf;
  return std::nullopt;
}

Query parse_query(std::string_view text, const Tagger& tagger, std::span<const SyntacticPattern> patterns) {
  Query q;
  q.text = std::string(text);
  q.tokens = tokenize(text);
  auto tagged = tagger.tag(q.tokens);
  for (auto& t : tagged) t.imp = 1.0;
  q.terms = apply_patterns(tagged, patterns);
  if (q.terms.empty()) {
    SyntacticTerm t;
    bool any = false;
    for (const auto& tok : tagged) {
      if (tok.category == Category::Other) continue;
      any = true;
      if (tok.category == Category::Sem) {
        if (!t.head) t.head = WeightedConcept{tok.id, 1.0};
      } else {
        add_attribute(t, tok);
      }
    }
    if (!any) throw Error("unindexable query: '" + q.text + "' names no vocabulary concept");
    q.terms.push_back(std::move(t));
  }
  return q;
}

double term_similarity(const SyntacticTerm& a, const SyntacticTerm& b, const MembershipTable& table,
                       const SemanticLattice& lattice, FacetKernel kernel) {
  double sim = facet_similarity(term_vectors(a), term_vectors(b), kernel);
  if (!a.head || !b.head) return sim;
  const auto ca = canonical(lattice, a.head->id);
  const auto cb = canonical(lattice, b.head->id);
  return sim + lattice.path_similarity(ca, cb) * (table.mu_tot(ca) + table.mu_tot(cb));
}

TfIdfIndex::TfIdfIndex(const std::vector<std::vector<std::string>>& documents) {
  std::vector<std::map<std::string, double, std::less<>>> tf(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& tok : documents[d]) tf[d][tok] += 1.0;
    for (const auto& [term, _] : tf[d]) ++df_[term];
  }
  weights_.resize(documents.size());
  norms_.assign(documents.size(), 0.0);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    double norm = 0.0;
    for (const auto& [term, count] : tf[d]) {
      const double w = count * idf(term);
      if (w > 0.0) {
        weights_[d][term] = w;
        norm += w * w;
      }
    }
    norms_[d] = std::sqrt(norm);
  }
}

double TfIdfIndex::idf(std::string_view term) const {
  auto it = df_.find(term);
  if (it == df_.end() || norms_.empty()) return 0.0;
  return std::log(static_cast<double>(norms_.size()) / static_cast<double>(it->second));
}

std::vector<double> TfIdfIndex::scores(std::span<const std::string> query_tokens) const {
  std::map<std::string, double, std::less<>> q;
  for (const auto& tok : query_tokens) q[tok] += 1.0;
  double qnorm = 0.0;
  for (auto& [term, w] : q) {
    w *= idf(term);
    qnorm += w * w;
  }
  qnorm = std::sqrt(qnorm);
  std::vector<double> out(norms_.size(), 0.0);
  if (qnorm == 0.0) return out;
  for (std::size_t d = 0; d < norms_.size(); ++d) {
    if (norms_[d] == 0.0) continue;
    double dot = 0.0;
    for (const auto& [term, w] : q) {
      auto it = weights_[d].find(term);
      if (it != weights_[d].end()) dot += w * it->second;
    }
    out[d] = dot / (qnorm * norms_[d]);
  }
  return out;
}

SearchIndex::SearchIndex(SemanticLattice lattice, std::vector<SyntacticPattern> patterns, RankingOptions options,
                         std::vector<SearchDocument> documents)
    : lattice_(std::make_unique<SemanticLattice>(std::move(lattice))),
      tagger_(std::make_unique<Tagger>(*lattice_, nullptr, AttributeLexicon::defaults())),
      patterns_(std::move(patterns)),
      options_(options),
      documents_(std::move(documents)) {
  std::sort(documents_.begin(), documents_.end(),
            [](const SearchDocument& a, const SearchDocument& b) { return a.doc_id < b.doc_id; });
  std::vector<std::vector<std::string>> bags;
  bags.reserve(documents_.size());
  for (const auto& d : documents_) bags.push_back(d.tokens);
  tfidf_ = TfIdfIndex(bags);
}

bool SearchIndex::contains(std::string_view doc_id) const {
  auto it = std::lower_bound(documents_.begin(), documents_.end(), doc_id,
                             [](const SearchDocument& d, std::string_view id) { return d.doc_id < id; });
  return it != documents_.end() && it->doc_id == doc_id;
}

Query SearchIndex::parse(std::string_view text, std::string id) const {
  auto q = parse_query(text, *tagger_, patterns_);
  q.id = std::move(id);
  return q;
}

MembershipTable SearchIndex::table_for(const Query& query, const SearchDocument& doc, Strategy strategy) const {
  std::vector<std::string> universe;
  std::set<std::string> seen;
  auto add = [&](std::string_view id) {
    auto c = canonical(*lattice_, id);
    if (seen.insert(c).second) universe.push_back(std::move(c));
  };
  for (const auto& t : query.terms) {
    if (t.head) add(t.head->id);
  }
  std::span<const WeightedConcept> vis_ev;
  std::span<const WeightedConcept> cx_ev;
  switch (strategy) {
    case Strategy::Vis:
      for (const auto& r : doc.vis) add(r.vsc);
      vis_ev = doc.vis_evidence;
      break;
    case Strategy::Cx:
      for (const auto& t : doc.terms) {
        if (t.head) add(t.head->id);
      }
      cx_ev = doc.cx_evidence;
      break;
    case Strategy::VisCx:
      for (const auto& r : doc.enriched) add(r.vsc);
      vis_ev = doc.vis_evidence;
      cx_ev = doc.cx_evidence;
      break;
    case Strategy::TfIdf:
      break;
  }
  return serial::aggregate_mu_tot(universe, vis_ev, cx_ev, *lattice_, options_.tconorm);
}

double SearchIndex::score(const Query& query, const SearchDocument& doc, Strategy strategy) const {
  if (strategy == Strategy::TfIdf) {
    auto it = std::find_if(documents_.begin(), documents_.end(),
                           [&](const SearchDocument& d) { return d.doc_id == doc.doc_id; });
    if (it == documents_.end()) return 0.0;
    std::vector<std::string> stems;
    for (const auto& t : query.tokens) stems.push_back(stem(t));
    return tfidf_.scores(stems)[static_cast<std::size_t>(it - documents_.begin())];
  }
  const auto table = table_for(query, doc, strategy);
  double total = 0.0;
  for (const auto& q : query.terms) {
    double best = 0.0;
    if (strategy == Strategy::Cx) {
      for (const auto& t : doc.terms) best = std::max(best, term_similarity(q, t, table, *lattice_, options_.kernel));
    } else {
      const auto& records = strategy == Strategy::Vis ? doc.vis : doc.enriched;
      for (const auto& r : records) {
        best = std::max(best, structure_similarity(q, r, table, *lattice_, options_.kernel));
      }
    }
    total += best;
  }
  return total;
}

std::vector<double> SearchIndex::all_scores(const Query& query, Strategy strategy, bool parallel) const {
  if (strategy == Strategy::TfIdf) {
    std::vector<std::string> stems;
    for (const auto& t : query.tokens) stems.push_back(stem(t));
    return tfidf_.scores(stems);
  }
  std::vector<double> out(documents_.size(), 0.0);
  if (!parallel) {
    for (std::size_t d = 0; d < documents_.size(); ++d) out[d] = score(query, documents_[d], strategy);
    return out;
  }
  std::exception_ptr failure;
  const auto n = static_cast<long>(documents_.size());
#pragma omp parallel for schedule(dynamic)
  for (long d = 0; d < n; ++d) {
    try {
      out[static_cast<std::size_t>(d)] = score(query, documents_[static_cast<std::size_t>(d)], strategy);
    } catch (...) {
#pragma omp critical(visenrich_rank_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

RankedList to_ranked(const std::vector<SearchDocument>& docs, const std::vector<double>& scores,
                     const std::string& query_id, std::size_t k) {
  RankedList list;
  list.query_id = query_id;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (scores[d] > 0.0) list.entries.push_back({docs[d].doc_id, scores[d]});
  }
  std::sort(list.entries.begin(), list.entries.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (k > 0 && list.entries.size() > k) list.entries.resize(k);
  return list;
}

}  // namespace

RankedList SearchIndex::rank(const Query& query, Strategy strategy, std::size_t k) const {
  return to_ranked(documents_, all_scores(query, strategy, true), query.id, k);
}

RankedList serial_rank(const SearchIndex& index, const Query& query, Strategy strategy, std::size_t k) {
  return to_ranked(index.documents_, index.all_scores(query, strategy, false), query.id, k);
}

std::vector<QueryText> read_queries(std::istream& in) {
  std::vector<QueryText> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected 'id<TAB>text'", line_no, 1);
    QueryText q{std::string(trim(std::string_view(line).substr(0, tab))),
                std::string(trim(std::string_view(line).substr(tab + 1)))};
    if (q.id.empty()) throw ParseError("empty query id", line_no, 1);
    out.push_back(std::move(q));
  }
  return out;
}

Qrels read_qrels(std::istream& in) {
  Qrels out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) throw ParseError("expected 'query_id<TAB>doc_id<TAB>grade'", line_no, 1);
    int grade = 0;
    try {
      std::size_t used = 0;
      grade = std::stoi(std::string(fields[2]), &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("grade must be an integer", line_no, 1);
    }
    if (grade < 0) throw RangeError(std::to_string(line_no) + ":1: grade must be non-negative");
    out[std::string(fields[0])][std::string(fields[1])] = grade;
  }
  return out;
}

double ndcg_at_n(const RankedList& list, const Qrels& qrels, int n) {
  if (n < 1) throw RangeError("ndcg cutoff must be >= 1");
  auto q = qrels.find(list.query_id);
  if (q == qrels.end()) return 0.0;
  const auto gain = [](int g) { return std::exp2(static_cast<double>(g)) - 1.0; };
  const auto cut = static_cast<std::size_t>(n);

  std::vector<int> ideal;
  for (const auto& [_, g] : q->second) ideal.push_back(g);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(cut, ideal.size()); ++i) idcg += gain(ideal[i]) / std::log2(i + 2.0);
  if (idcg == 0.0) return 0.0;

  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(cut, list.entries.size()); ++i) {
    auto it = q->second.find(list.entries[i].doc_id);
    if (it != q->second.end()) dcg += gain(it->second) / std::log2(i + 2.0);
  }
  return dcg / idcg;
}

double EvalReport::mean(Strategy s, int n) const {
  for (const auto& c : summary) {
    if (c.strategy == s && c.n == n) return c.mean_ndcg;
  }
  throw Error("no summary cell for " + std::string(to_string(s)) + "@" + std::to_string(n));
}

EvalReport eval_report(const SearchIndex& index, std::span<const QueryText> queries, const Qrels& qrels,
                       std::span<const Strategy> strategies, std::span<const int> ns) {
  EvalReport report;
  int max_n = 0;
  for (int n : ns) {
    if (n < 1) throw RangeError("ndcg cutoff must be >= 1");
    max_n = std::max(max_n, n);
  }

  Qrels known;
  for (const auto& [qid, docs] : qrels) {
    auto& dst = known[qid];
    for (const auto& [doc, g] : docs) {
      if (index.contains(doc)) {
        dst[doc] = g;
      } else {
        report.warnings.push_back("qrels for query '" + qid + "' name unknown document '" + doc +
                                  "'; treated as grade 0");
      }
    }
  }

  std::vector<Query> parsed;
  for (const auto& qt : queries) {
    if (!qrels.contains(qt.id)) {
      report.warnings.push_back("query '" + qt.id + "' has no relevance judgments; skipped");
      continue;
    }
    try {
      parsed.push_back(index.parse(qt.text, qt.id));
    } catch (const Error& e) {
      report.warnings.push_back("query '" + qt.id + "' skipped: " + e.what());
    }
  }
  report.evaluated_queries = parsed.size();

  for (auto s : strategies) {
    std::vector<double> sums(ns.size(), 0.0);
    for (const auto& q : parsed) {
      auto list = index.rank(q, s, static_cast<std::size_t>(max_n));
      for (std::size_t j = 0; j < ns.size(); ++j) {
        const double v = ndcg_at_n(list, known, ns[j]);
        sums[j] += v;
        report.per_query.push_back({q.id, s, ns[j], v});
      }
    }
    std::vector<std::size_t> order(ns.size());
    for (std::size_t j = 0; j < ns.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ns[a] < ns[b]; });
    for (auto j : order) {
      report.summary.push_back({s, ns[j], parsed.empty() ? 0.0 : sums[j] / static_cast<double>(parsed.size())});
    }
  }
  return report;
}

std::string summary_table(const EvalReport& report) {
  std::ostringstream out;
  out << "strategy\tn\tmean_ndcg\n";
  for (const auto& c : report.summary) out << to_string(c.strategy) << '\t' << c.n << '\t' << fixed6(c.mean_ndcg) << '\n';
  return out.str();
}

std::string per_query_table(const EvalReport& report) {
  std::ostringstream out;
  out << "query_id\tstrategy\tn\tndcg\n";
  for (const auto& r : report.per_query) {
    out << r.query_id << '\t' << to_string(r.strategy) << '\t' << r.n << '\t' << fixed6(r.ndcg) << '\n';
  }
  return out.str();
}

}  // namespace visenrich
