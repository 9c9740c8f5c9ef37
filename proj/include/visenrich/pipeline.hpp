#pragma once

// Corpus ingestion, per-document enrichment and search index construction.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "visenrich/config.hpp"
#include "visenrich/index_store.hpp"
#include "visenrich/lattice.hpp"
#include "visenrich/retrieval.hpp"

namespace visenrich {

// Pairs every `<stem>.html` of `corpus_dir` with `<stem>.vis` and extracts the
// context areas of the image whose src stem equals `<stem>` (or the first
// image). Unpaired files and malformed VIS files are skipped with a warning.
// Throws Error for a missing directory or an unreadable file.
IndexStore ingest_corpus(const std::filesystem::path& corpus_dir, const ExtractionOptions& options,
                         std::vector<std::string>* warnings = nullptr);

// Adds `id` to `target` below its parents in `source`, grafting missing
// ancestors first. Synonyms already used in `target` are dropped. Every
// inserted concept is appended to `added`.
void graft(SemanticLattice& target, const SemanticLattice& source, std::string_view id,
           std::vector<LatticeAddition>* added = nullptr);

// Base lattice plus the document's recorded additions.
SemanticLattice document_lattice(const SemanticLattice& base, const IndexRecord& record);

// Tagging, impacts, patterns, lattice enrichment, membership table,
// correspondences and fusion for one document. Unknown visual concepts that
// the knowledge taxonomy does not cover become new roots (logged).
IndexRecord enrich_record(const IndexRecord& record, const SemanticLattice& base,
                          const SemanticLattice* knowledge, const Tagger& tagger, const PipelineConfig& config);

// Enriches every record (documents in parallel) and stores the taxonomy
// texts and config in the header.
void enrich_store(IndexStore& store, const std::string& taxonomy_text, const std::string& knowledge_text,
                  const PipelineConfig& config);

// Search index over an enriched store. A store without a header must be
// empty.
SearchIndex build_search_index(const IndexStore& store);

}  // namespace visenrich
