#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "darkcorpus/page.hpp"
#include "darkcorpus/stats.hpp"

namespace darkcorpus {

inline constexpr std::string_view kDefaultSeparator = "</s>";

// Lowercases the Latin-1 range and leaves everything else alone. Idempotent.
std::string case_fold(std::string_view text);

// Rewrites every occurrence of separator inside text by inserting a space
// after the separator's first byte, repeating until none remain. escapes, if
// given, counts the rewrites.
std::string escape_separator(std::string_view text, std::string_view separator,
                             std::uint64_t* escapes = nullptr);

struct EmitOptions {
    std::string separator{kDefaultSeparator};
    bool uncased{false};  // apply case_fold to every page
};

struct EmitTotals {
    std::uint64_t pages{0};
    std::uint64_t bytes{0};  // bytes written, separators included
    std::uint64_t separator_escapes{0};
};

// Writes page texts joined by the separator (between pages only, no leading
// or trailing separator). Page text is folded first when uncased, then
// escaped, so the written stream splits back into exactly one chunk per page.
EmitTotals emit_corpus(std::ostream& out, const std::vector<PageRecord>& pages,
                       const EmitOptions& options = {});

struct StageRecord {
    std::string name;
    std::uint64_t pages_in{0};
    std::uint64_t pages_out{0};
    std::uint64_t bytes_in{0};   // text bytes entering the stage
    std::uint64_t bytes_out{0};  // text bytes leaving the stage
    std::map<std::string, std::string> parameters;
};

struct CorpusManifest {
    std::string tool_version;
    std::string variant;       // "raw" or "preprocessed"
    std::string case_variant;  // "cased" or "uncased"
    std::string separator{kDefaultSeparator};
    std::uint64_t seed{0};
    EmitTotals totals;
    std::vector<StageRecord> stages;
    CharCountQuartiles quartiles;  // measured where the pipeline ingested
    ReductionReport reduction;
    CategoryDistribution final_distribution;
    std::string config_json;  // effective configuration, embedded verbatim
};

// Canonical JSON: object keys sorted, two-space indent, newline-terminated.
// Equal manifests serialize to identical bytes.
void write_manifest(std::ostream& out, const CorpusManifest& manifest);

std::string manifest_to_json(const CorpusManifest& manifest);

}  // namespace darkcorpus
