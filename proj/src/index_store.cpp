#include "visenrich/index_store.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "visenrich/error.hpp"

namespace visenrich {

using nlohmann::json;

namespace {

template <class E>
json facet_map(const std::map<E, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::string(vocab_name(k))] = v;
  return out;
}

template <class E>
std::map<E, double> facet_map_from(const json& j) {
  std::map<E, double> out;
  for (const auto& [k, v] : j.items()) {
    auto e = parse_vocab<E>(k);
    if (!e) throw Error("unknown vocabulary name '" + k + "'");
    out[*e] = v.template get<double>();
  }
  return out;
}

Category parse_category(std::string_view s) {
  for (auto c : {Category::Sem, Category::Color, Category::Texture, Category::Spatial, Category::Other}) {
    if (to_string(c) == s) return c;
  }
  throw Error("unknown category '" + std::string(s) + "'");
}

json term_json(const SyntacticTerm& t) {
  json j;
  j["head"] = t.head ? json{{"id", t.head->id}, {"value", t.head->value}} : json(nullptr);
  j["colors"] = facet_map(t.colors);
  j["textures"] = facet_map(t.textures);
  j["spatials"] = facet_map(t.spatials);
  return j;
}

SyntacticTerm term_from(const json& j) {
  SyntacticTerm t;
  if (!j.at("head").is_null()) {
    t.head = WeightedConcept{j["head"].at("id").get<std::string>(), j["head"].at("value").get<double>()};
  }
  t.colors = facet_map_from<Color>(j.at("colors"));
  t.textures = facet_map_from<Texture>(j.at("textures"));
  t.spatials = facet_map_from<SpatialRelation>(j.at("spatials"));
  return t;
}

json record_json(const IndexRecord& r) {
  json j;
  j["type"] = "doc";
  j["doc_id"] = r.doc_id;
  j["html"] = r.html_path;
  j["vis_path"] = r.vis_path;
  j["areas"] = json::array();
  for (const auto& a : r.areas) {
    j["areas"].push_back({{"kind", to_string(a.kind)}, {"impact", a.base_impact}, {"tokens", a.tokens}});
  }
  j["vis"] = serialize_vis(r.vis);
  j["concepts"] = json::array();
  for (const auto& c : r.concepts) {
    j["concepts"].push_back(
        {{"category", to_string(c.category)}, {"id", c.id}, {"imp", c.imp}, {"area", to_string(c.area)}});
  }
  j["terms"] = json::array();
  for (const auto& t : r.terms) j["terms"].push_back(term_json(t));
  j["lattice_additions"] = json::array();
  for (const auto& a : r.lattice_additions) {
    j["lattice_additions"].push_back({{"id", a.id}, {"synonyms", a.synonyms}, {"parents", a.parents}});
  }
  if (r.enriched) {
    j["enriched"] = json::array();
    for (const auto& e : *r.enriched) {
      j["enriched"].push_back({
          {"vo_id", e.record.vo_id},
          {"vsc", e.record.vsc},
          {"original_vsc", e.original_vsc},
          {"final_mu", e.final_mu},
          {"provenance", to_string(e.provenance)},
          {"matched_term", e.matched_term ? json(*e.matched_term) : json(nullptr)},
          {"cx", e.cx},
          {"mu_vsc", e.mu_vsc},
          {"mu_cx", e.mu_cx},
          {"sim", e.sim},
          {"branch", e.branch},
      });
    }
  }
  j["log"] = r.log;
  return j;
}

IndexRecord record_from(const json& j) {
  IndexRecord r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.html_path = j.at("html").get<std::string>();
  r.vis_path = j.at("vis_path").get<std::string>();
  for (const auto& a : j.at("areas")) {
    auto kind = parse_area_kind(a.at("kind").get<std::string>());
    if (!kind) throw Error("unknown area kind");
    r.areas.push_back(ExtractionArea{*kind, a.at("tokens").get<std::vector<std::string>>(),
                                     a.at("impact").get<double>()});
  }
  r.vis = parse_vis(j.at("vis").get<std::string>());
  for (const auto& c : j.at("concepts")) {
    auto area = parse_area_kind(c.at("area").get<std::string>());
    if (!area) throw Error("unknown area kind");
    r.concepts.push_back(ContextualConcept{parse_category(c.at("category").get<std::string>()),
                                           c.at("id").get<std::string>(), c.at("imp").get<double>(), *area});
  }
  for (const auto& t : j.at("terms")) r.terms.push_back(term_from(t));
  for (const auto& a : j.at("lattice_additions")) {
    r.lattice_additions.push_back(LatticeAddition{a.at("id").get<std::string>(),
                                                  a.at("synonyms").get<std::vector<std::string>>(),
                                                  a.at("parents").get<std::vector<std::string>>()});
  }
  if (j.contains("enriched")) {
    std::vector<EnrichedVisRecord> list;
    for (const auto& e : j["enriched"]) {
      const auto vo = e.at("vo_id").get<std::string>();
      auto it = std::find_if(r.vis.begin(), r.vis.end(), [&](const VisRecord& v) { return v.vo_id == vo; });
      if (it == r.vis.end()) throw Error("enriched record refers to unknown vo '" + vo + "'");
      EnrichedVisRecord out;
      out.record = *it;
      out.record.vsc = e.at("vsc").get<std::string>();
      out.original_vsc = e.at("original_vsc").get<std::string>();
      out.final_mu = e.at("final_mu").get<double>();
      auto prov = parse_provenance(e.at("provenance").get<std::string>());
      if (!prov) throw Error("unknown provenance");
      out.provenance = *prov;
      if (!e.at("matched_term").is_null()) out.matched_term = e["matched_term"].get<std::size_t>();
      out.cx = e.at("cx").get<std::string>();
      out.mu_vsc = e.at("mu_vsc").get<double>();
      out.mu_cx = e.at("mu_cx").get<double>();
      out.sim = e.at("sim").get<double>();
      out.branch = e.at("branch").get<std::string>();
      list.push_back(std::move(out));
    }
    r.enriched = std::move(list);
  }
  r.log = j.at("log").get<std::vector<std::string>>();
  return r;
}

}  // namespace

void IndexStore::put(IndexRecord record) {
  auto it = std::lower_bound(records.begin(), records.end(), record.doc_id,
                             [](const IndexRecord& r, const std::string& id) { return r.doc_id < id; });
  if (it != records.end() && it->doc_id == record.doc_id) *it = std::move(record);
  else records.insert(it, std::move(record));
}

const IndexRecord* IndexStore::find(std::string_view doc_id) const {
  auto it = std::lower_bound(records.begin(), records.end(), doc_id,
                             [](const IndexRecord& r, std::string_view id) { return r.doc_id < id; });
  if (it != records.end() && it->doc_id == doc_id) return &*it;
  return nullptr;
}

void write_store(std::ostream& out, const IndexStore& store) {
  if (store.header) {
    json h;
    h["type"] = "header";
    h["taxonomy"] = store.header->taxonomy;
    h["knowledge"] = store.header->knowledge;
    h["config"] = to_config_text(store.header->config);
    out << h.dump() << '\n';
  }
  for (const auto& r : store.records) out << record_json(r).dump() << '\n';
}

IndexStore read_store(std::istream& in) {
  IndexStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        if (line_no != 1 || store.header) throw Error("header must be the first line");
        StoreHeader h;
        h.taxonomy = j.at("taxonomy").get<std::string>();
        h.knowledge = j.at("knowledge").get<std::string>();
        h.config = parse_config(j.at("config").get<std::string>());
        store.header = std::move(h);
      } else if (type == "doc") {
        auto r = record_from(j);
        if (store.find(r.doc_id)) throw Error("duplicate doc_id '" + r.doc_id + "'");
        store.put(std::move(r));
      } else {
        throw Error("unknown line type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("index store: ") + e.what(), line_no, 1);
    } catch (const Error& e) {
      throw ParseError(std::string("index store: ") + e.what(), line_no, 1);
    }
  }
  return store;
}

void save_store(const std::filesystem::path& path, const IndexStore& store) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    write_store(out, store);
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

IndexStore load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read index '" + path.string() + "'");
  return read_store(in);
}

}  // namespace visenrich
