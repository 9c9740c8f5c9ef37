#pragma once

// Persisted index: one JSON object per line. An optional header line carries
// the taxonomy texts and configuration used by enrich; every other line is one
// document record. Records are kept sorted by doc_id.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "visenrich/config.hpp"
#include "visenrich/context.hpp"
#include "visenrich/fusion.hpp"
#include "visenrich/vis.hpp"

namespace visenrich {

// A concept grafted onto the base lattice for one document.
struct LatticeAddition {
  std::string id;
  std::vector<std::string> synonyms;
  std::vector<std::string> parents;

  bool operator==(const LatticeAddition&) const = default;
};

struct IndexRecord {
  std::string doc_id;
  std::string html_path;
  std::string vis_path;
  std::vector<ExtractionArea> areas;
  std::vector<VisRecord> vis;
  // Filled by enrich.
  std::vector<ContextualConcept> concepts;
  std::vector<SyntacticTerm> terms;
  std::vector<LatticeAddition> lattice_additions;
  std::optional<std::vector<EnrichedVisRecord>> enriched;
  std::vector<std::string> log;

  bool operator==(const IndexRecord&) const = default;
};

struct StoreHeader {
  std::string taxonomy;    // taxonomy text
  std::string knowledge;   // empty when none was configured
  PipelineConfig config;

  bool operator==(const StoreHeader&) const = default;
};

struct IndexStore {
  std::optional<StoreHeader> header;
  std::vector<IndexRecord> records;

  // Adds or replaces the record with the same doc_id, keeping the order.
  void put(IndexRecord record);
  const IndexRecord* find(std::string_view doc_id) const;

  bool operator==(const IndexStore&) const = default;
};

void write_store(std::ostream& out, const IndexStore& store);
IndexStore read_store(std::istream& in);

// Writes through a temporary file renamed over `path`.
void save_store(const std::filesystem::path& path, const IndexStore& store);
IndexStore load_store(const std::filesystem::path& path);

}  // namespace visenrich
