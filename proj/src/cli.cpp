#include "visenrich/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "visenrich/error.hpp"
#include "visenrich/pipeline.hpp"

namespace visenrich {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(std::string("cannot read ") + what + " '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::string score_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Options {
  std::string corpus;
  std::string out;
  std::string index;
  std::string taxonomy;
  std::string knowledge;
  std::string config;
  std::string strategy;
  std::string query;
  std::size_t k = 10;
  std::string queries;
  std::string qrels;
};

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  ExtractionOptions extraction;
  if (!o.config.empty()) extraction = load_config(o.config).extraction;
  std::vector<std::string> warnings;
  auto store = ingest_corpus(o.corpus, extraction, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  save_store(o.out, store);
  out << "ingested " << store.records.size() << " documents into " << o.out << '\n';
  return kExitOk;
}

int cmd_enrich(const Options& o, std::ostream& out, std::ostream& err) {
  PipelineConfig config;
  if (!o.config.empty()) config = load_config(o.config);
  if (!o.taxonomy.empty()) config.taxonomy = o.taxonomy;
  if (!o.knowledge.empty()) config.knowledge = o.knowledge;
  if (config.taxonomy.empty()) throw Error("no taxonomy given (use --taxonomy or the config key 'taxonomy')");
  const auto taxonomy = read_text(config.taxonomy, "taxonomy");
  const auto knowledge = config.knowledge.empty() ? std::string{} : read_text(config.knowledge, "knowledge taxonomy");

  auto store = load_store(o.index);
  enrich_store(store, taxonomy, knowledge, config);
  std::size_t changed = 0;
  for (const auto& r : store.records) {
    for (const auto& line : r.log) {
      if (line.find("added as a root") != std::string::npos) err << "warning: " << r.doc_id << ": " << line << '\n';
    }
    for (const auto& e : *r.enriched) changed += e.provenance != Provenance::Kept;
  }
  save_store(o.index, store);
  out << "enriched " << store.records.size() << " documents (" << changed << " visual concepts changed)\n";
  return kExitOk;
}

int cmd_search(const Options& o, std::ostream& out, std::ostream&) {
  const auto strategy = *parse_strategy(o.strategy);
  const auto store = load_store(o.index);
  const auto index = build_search_index(store);
  if (index.documents().empty()) return kExitOk;
  Query query;
  if (strategy == Strategy::TfIdf) {
    query.text = o.query;
    query.tokens = tokenize(o.query);
  } else {
    query = index.parse(o.query);
  }
  auto list = index.rank(query, strategy, o.k);
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    out << (i + 1) << ' ' << list.entries[i].doc_id << ' ' << score_text(list.entries[i].score) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const auto store = load_store(o.index);
  std::vector<int> ns{5, 10, 20};
  if (!o.config.empty()) ns = load_config(o.config).ndcg_n;
  else if (store.header) ns = store.header->config.ndcg_n;

  std::ifstream qin(o.queries);
  if (!qin) throw Error("cannot read queries '" + o.queries + "'");
  const auto queries = read_queries(qin);
  std::ifstream rin(o.qrels);
  if (!rin) throw Error("cannot read qrels '" + o.qrels + "'");
  const auto qrels = read_qrels(rin);

  const auto index = build_search_index(store);
  auto report = eval_report(index, queries, qrels, kAllStrategies, ns);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';

  fs::create_directories(o.out);
  write_text(fs::path(o.out) / "summary.tsv", summary_table(report));
  write_text(fs::path(o.out) / "per_query.tsv", per_query_table(report));
  out << summary_table(report);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Enrich visual index structures of web images with contextual concepts"};
  app.name("visenrich");
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Build an index store from a corpus of .html/.vis pairs");
  ingest->add_option("--corpus", o.corpus, "Corpus directory")->required();
  ingest->add_option("--out", o.out, "Index store to write")->required();
  ingest->add_option("--config", o.config, "Config file (impacts, window)");

  auto* enrich = app.add_subcommand("enrich", "Enrich every document of an index store in place");
  enrich->add_option("--index", o.index, "Index store")->required();
  enrich->add_option("--taxonomy", o.taxonomy, "Taxonomy TSV (overrides the config)");
  enrich->add_option("--config", o.config, "Config file");
  enrich->add_option("--knowledge", o.knowledge, "Wider taxonomy for contextual concepts (overrides the config)");

  auto* search = app.add_subcommand("search", "Rank the documents of an enriched index for a query");
  search->add_option("--index", o.index, "Index store")->required();
  search->add_option("--strategy", o.strategy, "vis | cx | vis+cx | tfidf")
      ->required()
      ->check(CLI::IsMember({"vis", "cx", "vis+cx", "tfidf"}));
  search->add_option("--query", o.query, "Query text")->required();
  search->add_option("-k", o.k, "Number of results")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "NDCG@n per strategy over a query set");
  eval->add_option("--index", o.index, "Index store")->required();
  eval->add_option("--queries", o.queries, "Queries file (id<TAB>text)")->required();
  eval->add_option("--qrels", o.qrels, "Relevance judgments (query<TAB>doc<TAB>grade)")->required();
  eval->add_option("--config", o.config, "Config file (ndcg_n)");
  eval->add_option("--out", o.out, "Report directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(o, out, err);
    if (*enrich) return cmd_enrich(o, out, err);
    if (*search) return cmd_search(o, out, err);
    return cmd_eval(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitData;
}

}  // namespace visenrich
