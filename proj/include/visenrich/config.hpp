#pragma once

// Pipeline configuration: a flat `key = value` text file.
//
//   taxonomy = taxonomy.tsv          path, relative to the config file
//   knowledge = wider.tsv            optional
//   impact.alt = 0.9
//   impact.src = 0.7
//   impact.surrounding = 0.5
//   window = 600
//   patterns = SEM OTHER{0..3} COLOR; ...   (';' separated)
//   tconorm = psum                   max | psum | bsum
//   kernel = max                     max | min | product
//   t_mu = 0.1
//   t_sim = 0.05
//   fusion_literal = false
//   ndcg_n = 5,10,20

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "visenrich/context.hpp"
#include "visenrich/fusion.hpp"
#include "visenrich/fuzzy.hpp"

namespace visenrich {

struct PipelineConfig {
  std::filesystem::path taxonomy;
  std::filesystem::path knowledge;
  ExtractionOptions extraction;
  std::vector<SyntacticPattern> patterns = default_patterns();
  TConorm tconorm = TConorm::ProbabilisticSum;
  FusionConfig fusion;
  std::vector<int> ndcg_n{5, 10, 20};

  bool operator==(const PipelineConfig& o) const {
    return taxonomy == o.taxonomy && knowledge == o.knowledge && extraction.impacts == o.extraction.impacts &&
           extraction.window == o.extraction.window && patterns == o.patterns && tconorm == o.tconorm &&
           fusion == o.fusion && ndcg_n == o.ndcg_n;
  }
};

// Parses config text. Relative paths are resolved against `base_dir`.
// Unknown keys, malformed values and out-of-range thresholds throw
// ParseError / RangeError. Paths are not checked here.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

// Reads and parses a config file, then checks that referenced files exist.
PipelineConfig load_config(const std::filesystem::path& path);

// Text form accepted by parse_config.
std::string to_config_text(const PipelineConfig& config);

void validate(const PipelineConfig& config);

}  // namespace visenrich
