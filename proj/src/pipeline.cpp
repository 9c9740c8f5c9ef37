#include "visenrich/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>

#include "visenrich/error.hpp"

namespace visenrich {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("cannot read '" + path.string() + "'");
  return buf.str();
}

// Adds `id` as a root when neither lattice knows it.
void admit(SemanticLattice& lattice, const SemanticLattice* knowledge, const std::string& id,
           std::vector<LatticeAddition>& added, std::vector<std::string>& log) {
  if (lattice.contains(id)) return;
  if (knowledge && knowledge->contains(id)) {
    graft(lattice, *knowledge, id, &added);
    return;
  }
  lattice.insert(Concept{id, {}}, {});
  added.push_back(LatticeAddition{to_lower(id), {}, {}});
  log.push_back("concept '" + id + "' is not in the taxonomy; added as a root");
}

}  // namespace

IndexStore ingest_corpus(const fs::path& corpus_dir, const ExtractionOptions& options,
                         std::vector<std::string>* warnings) {
  if (!fs::is_directory(corpus_dir)) throw Error("corpus directory '" + corpus_dir.string() + "' not found");
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };

  std::vector<fs::path> html_files;
  std::vector<fs::path> vis_files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".html" || ext == ".htm") html_files.push_back(entry.path());
    else if (ext == ".vis") vis_files.push_back(entry.path());
  }
  std::sort(html_files.begin(), html_files.end());
  std::sort(vis_files.begin(), vis_files.end());

  IndexStore store;
  for (const auto& html_path : html_files) {
    const auto stem = html_path.stem().string();
    auto vis_path = html_path;
    vis_path.replace_extension(".vis");
    if (!fs::exists(vis_path)) {
      warn(html_path.filename().string() + ": no " + vis_path.filename().string() + " sidecar; skipped");
      continue;
    }
    if (store.find(stem)) {
      warn(html_path.filename().string() + ": duplicate document id '" + stem + "'; skipped");
      continue;
    }

    IndexRecord rec;
    rec.doc_id = stem;
    rec.html_path = html_path.filename().string();
    rec.vis_path = vis_path.filename().string();
    try {
      rec.vis = parse_vis(read_file(vis_path));
    } catch (const Error& e) {
      warn(rec.vis_path + ":" + e.what() + "; skipped");
      continue;
    }
    std::sort(rec.vis.begin(), rec.vis.end(),
              [](const VisRecord& a, const VisRecord& b) { return a.vo_id < b.vo_id; });

    const auto html = read_file(html_path);
    std::vector<std::string> extract_warnings;
    rec.areas = extract_areas(html, stem, options, &extract_warnings);
    if (!extract_warnings.empty()) {
      extract_warnings.clear();
      rec.areas = extract_areas(html, "", options, &extract_warnings);
      if (!extract_warnings.empty()) rec.log.push_back("page has no image; no context extracted");
    }
    store.put(std::move(rec));
  }
  for (const auto& vis_path : vis_files) {
    auto html_path = vis_path;
    html_path.replace_extension(".html");
    auto htm_path = vis_path;
    htm_path.replace_extension(".htm");
    if (!fs::exists(html_path) && !fs::exists(htm_path)) {
      warn(vis_path.filename().string() + ": no page for this VIS file; skipped");
    }
  }
  return store;
}

void graft(SemanticLattice& target, const SemanticLattice& source, std::string_view id,
           std::vector<LatticeAddition>* added) {
  if (target.contains(id)) return;
  const auto& info = source.concept_of(id);
  std::vector<std::string> parents;
  for (const auto& p : source.parents(info.id)) {
    graft(target, source, p, added);
    parents.emplace_back(*target.resolve(p));
  }
  std::vector<std::string> synonyms;
  for (const auto& s : info.synonyms) {
    if (!target.contains(s)) synonyms.push_back(s);
  }
  target.insert(Concept{info.id, synonyms}, parents);
  if (added) added->push_back(LatticeAddition{info.id, synonyms, parents});
}

SemanticLattice document_lattice(const SemanticLattice& base, const IndexRecord& record) {
  auto lattice = base;
  for (const auto& a : record.lattice_additions) lattice.insert(Concept{a.id, a.synonyms}, a.parents);
  return lattice;
}

IndexRecord enrich_record(const IndexRecord& record, const SemanticLattice& base,
                          const SemanticLattice* knowledge, const Tagger& tagger, const PipelineConfig& config) {
  IndexRecord out = record;
  out.log.clear();
  out.lattice_additions.clear();
  for (auto& a : out.areas) a.base_impact = config.extraction.impacts.for_kind(a.kind);

  auto analysis = analyze_context(out.areas, tagger, config.patterns);
  out.concepts = analysis.concepts;
  out.terms = analysis.terms;

  auto lattice = base;
  for (const auto& c : out.concepts) {
    if (c.category == Category::Sem) admit(lattice, knowledge, c.id, out.lattice_additions, out.log);
  }
  for (const auto& t : out.terms) {
    if (t.head) admit(lattice, knowledge, t.head->id, out.lattice_additions, out.log);
  }

  std::vector<VisRecord> records = out.vis;
  std::vector<WeightedConcept> vis_evidence;
  std::vector<WeightedConcept> cx_evidence;
  for (auto& r : records) {
    admit(lattice, knowledge, r.vsc, out.lattice_additions, out.log);
    r.vsc = std::string(*lattice.resolve(r.vsc));
    vis_evidence.push_back(WeightedConcept{r.vsc, r.r_vsc});
  }
  for (const auto& c : out.concepts) {
    if (c.category == Category::Sem) cx_evidence.push_back(WeightedConcept{std::string(*lattice.resolve(c.id)), c.imp});
  }

  const auto universe = lattice.ids();
  auto table = serial::aggregate_mu_tot(universe, vis_evidence, cx_evidence, lattice, config.tconorm);
  out.enriched = enrich_records(records, out.terms, table, lattice, config.fusion);
  for (const auto& e : *out.enriched) {
    std::string line = e.record.vo_id + ": " + std::string(to_string(e.provenance)) + " (" + e.branch + ")";
    if (e.record.vsc != e.original_vsc) line += " " + e.original_vsc + " -> " + e.record.vsc;
    out.log.push_back(std::move(line));
  }
  return out;
}

void enrich_store(IndexStore& store, const std::string& taxonomy_text, const std::string& knowledge_text,
                  const PipelineConfig& config) {
  validate(config);
  const auto base = SemanticLattice::from_taxonomy(taxonomy_text);
  std::optional<SemanticLattice> knowledge;
  if (!knowledge_text.empty()) knowledge = SemanticLattice::from_taxonomy(knowledge_text);
  const Tagger tagger(base, knowledge ? &*knowledge : nullptr, AttributeLexicon::defaults());

  std::vector<IndexRecord> results(store.records.size());
  std::exception_ptr failure;
  const auto n = static_cast<long>(store.records.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      const auto k = static_cast<std::size_t>(i);
      results[k] = enrich_record(store.records[k], base, knowledge ? &*knowledge : nullptr, tagger, config);
    } catch (...) {
#pragma omp critical(visenrich_enrich_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  store.records = std::move(results);
  store.header = StoreHeader{taxonomy_text, knowledge_text, config};
}

SearchIndex build_search_index(const IndexStore& store) {
  if (!store.header) {
    if (!store.records.empty()) throw Error("index has not been enriched; run enrich first");
    return SearchIndex(SemanticLattice{}, default_patterns(), RankingOptions{}, {});
  }
  const auto& h = *store.header;
  auto lattice = SemanticLattice::from_taxonomy(h.taxonomy);
  if (!h.knowledge.empty()) {
    const auto knowledge = SemanticLattice::from_taxonomy(h.knowledge);
    for (const auto& id : knowledge.ids()) graft(lattice, knowledge, id);
  }
  for (const auto& r : store.records) {
    for (const auto& a : r.lattice_additions) {
      if (!lattice.contains(a.id)) lattice.insert(Concept{a.id, a.synonyms}, a.parents);
    }
  }

  std::vector<SearchDocument> docs;
  docs.reserve(store.records.size());
  for (const auto& r : store.records) {
    SearchDocument d;
    d.doc_id = r.doc_id;
    for (auto v : r.vis) {
      auto id = lattice.resolve(v.vsc);
      if (!id) throw UnknownConceptError(v.vsc);
      v.vsc = std::string(*id);
      d.vis_evidence.push_back(WeightedConcept{v.vsc, v.r_vsc});
      d.vis.push_back(std::move(v));
    }
    if (r.enriched) {
      for (const auto& e : *r.enriched) d.enriched.push_back(e.record);
    } else {
      d.enriched = d.vis;
    }
    d.terms = r.terms;
    for (const auto& c : r.concepts) {
      if (c.category == Category::Sem) d.cx_evidence.push_back(WeightedConcept{c.id, c.imp});
    }
    for (const auto& a : r.areas) {
      for (const auto& t : a.tokens) d.tokens.push_back(stem(t));
    }
    docs.push_back(std::move(d));
  }
  return SearchIndex(std::move(lattice), h.config.patterns, RankingOptions{h.config.tconorm, h.config.fusion.kernel},
                     std::move(docs));
}

}  // namespace visenrich
