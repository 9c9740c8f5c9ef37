#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace visenrich {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (without the program name):
//   ingest --corpus DIR --out FILE [--config FILE]
//   enrich --index FILE --taxonomy FILE --config FILE [--knowledge FILE]
//   search --index FILE --strategy vis|cx|vis+cx|tfidf --query STR -k N
//   eval   --index FILE --queries FILE --qrels FILE --config FILE --out DIR
// Returns kExitOk, kExitUsage or kExitData.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace visenrich
