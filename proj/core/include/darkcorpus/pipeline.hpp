#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "darkcorpus/balance.hpp"
#include "darkcorpus/density.hpp"
#include "darkcorpus/emit.hpp"
#include "darkcorpus/jsonl.hpp"
#include "darkcorpus/language.hpp"
#include "darkcorpus/mask.hpp"
#include "darkcorpus/minhash.hpp"
#include "darkcorpus/page.hpp"

namespace darkcorpus {

// Everything a full run needs. The same struct drives the single-stage
// subcommands, so a chain of stages and one run read identical settings.
struct PipelineConfig {
    std::string variant{"preprocessed"};  // "preprocessed" masks, "raw" does not
    bool uncased{false};

    bool language_gate{true};
    LanguagePolicy language;

    bool density_filter{true};
    bool derive_density{false};  // floor(q1/2) and 2*q3 of the gated pages
    DensityThresholds density;

    std::vector<std::string> mask_rules;  // empty means every rule

    bool dedup{true};
    std::size_t shingle_size{kDefaultShingleSize};
    std::size_t permutations{kDefaultNumPermutations};
    double near_dup_threshold{0.0};

    std::string classifier{"keyword"};  // "label", "keyword" or "exec"
    std::string classifier_command;     // exec classifier shell command
    std::string lexicon_json;           // inline lexicon override, JSON object text
    std::string fallback_category{"Financial"};

    bool balance{true};
    std::uint64_t cap_bytes{kDefaultCapBytes};

    std::string separator{kDefaultSeparator};

    std::uint64_t seed{1};
    int workers{1};
    bool sidecar{false};
};

// Strict parse: unknown keys or wrong types raise std::invalid_argument.
PipelineConfig config_from_json(const std::string& json_text);

// Canonical serialization of every field; embedded in the manifest.
std::string config_to_json(const PipelineConfig& config);

// Per-stage seed derived from the run seed, equal wherever the stage runs.
std::uint64_t stage_seed(std::uint64_t master_seed, std::string_view stage);

// A stage that cannot continue (unusable classifier, unwritable output).
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Everything the pipeline learns on the way to the manifest. A chain of
// stage subcommands carries this between processes as a JSON file, so the
// final manifest comes out byte-identical to a single run.
struct PipelineTrail {
    std::vector<StageRecord> stages;
    CharCountQuartiles quartiles;
    bool have_quartiles{false};
    CategoryDistribution dist_initial;
    CategoryDistribution dist_after_dedup;
    CategoryDistribution dist_final;
    bool have_initial{false};
    bool have_after_dedup{false};
    bool have_final{false};
};

std::string trail_to_json(const PipelineTrail& trail);
PipelineTrail trail_from_json(const std::string& json_text);

// Stage drivers. Each consumes the pages, appends its stage record to the
// trail and returns the survivors; `dropped`, when given, collects removed
// pages with their status set. run_pipeline and the CLI subcommands call
// exactly these, which is what keeps the two paths byte-equal.
std::vector<PageRecord> stage_ingest(std::istream& in, const PipelineConfig& config,
                                     PipelineTrail& trail, LoadStats* stats = nullptr);
std::vector<PageRecord> stage_language_gate(std::vector<PageRecord> pages,
                                            const PipelineConfig& config, PipelineTrail& trail,
                                            std::vector<PageRecord>* dropped = nullptr);
std::vector<PageRecord> stage_density(std::vector<PageRecord> pages, const PipelineConfig& config,
                                      PipelineTrail& trail,
                                      std::vector<PageRecord>* dropped = nullptr);
std::vector<PageRecord> stage_mask(std::vector<PageRecord> pages, const PipelineConfig& config,
                                   PipelineTrail& trail,
                                   std::vector<MaskReport>* page_reports = nullptr);
std::vector<PageRecord> stage_dedup(std::vector<PageRecord> pages, const PipelineConfig& config,
                                    PipelineTrail& trail,
                                    std::vector<PageRecord>* dropped = nullptr);
std::vector<PageRecord> stage_balance(std::vector<PageRecord> pages, const PipelineConfig& config,
                                      PipelineTrail& trail,
                                      std::vector<PageRecord>* dropped = nullptr);
EmitTotals stage_emit(std::ostream& corpus_out, std::vector<PageRecord>& pages,
                      const PipelineConfig& config, PipelineTrail& trail);

// Assigns categories using the configured classifier when any page still
// lacks a valid one. Safe to call repeatedly.
void ensure_categories(std::vector<PageRecord>& pages, const PipelineConfig& config);

CorpusManifest assemble_manifest(const PipelineTrail& trail, const PipelineConfig& config,
                                 const EmitTotals& totals);

struct PipelineResult {
    CorpusManifest manifest;
    LoadStats load;
    std::uint64_t pages_final{0};
    std::vector<std::filesystem::path> outputs;
};

// Runs every enabled stage over `input` and writes corpus.txt, manifest.json
// and stats.json (plus sidecar.jsonl when configured) into out_dir. A
// status.json stamp starts as "incomplete" and flips to "complete" only
// after everything is written; outputs carry no timestamps, so equal input
// and config give byte-identical files.
PipelineResult run_pipeline(std::istream& input, const std::filesystem::path& out_dir,
                            const PipelineConfig& config);

}  // namespace darkcorpus
