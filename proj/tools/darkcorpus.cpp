// darkcorpus: curate crawled pages into a clean training corpus.
//
// Subcommands either run one pipeline stage over jsonl pages (filter, mask,
// dedup, balance, emit), observe a corpus (stats, folds), or run the whole
// pipeline (run). Chained stage subcommands sharing a --trail file and a
// --config produce the same corpus and manifest as one `run` with the
// language gate disabled, because both paths call the same stage drivers.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "darkcorpus/classify.hpp"
#include "darkcorpus/folds.hpp"
#include "darkcorpus/jsonl.hpp"
#include "darkcorpus/log.hpp"
#include "darkcorpus/mask.hpp"
#include "darkcorpus/pipeline.hpp"
#include "darkcorpus/stats.hpp"
#include "darkcorpus/version.hpp"

namespace dc = darkcorpus;
using json = nlohmann::json;

namespace {

// exit codes: 0 ok, 1 usage, 2 unreadable input, 3 stage failure
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::string input{"-"};
    std::string output{"-"};
    std::string config_path;
    std::string trail_path;

    std::uint64_t min_chars{0};
    std::uint64_t max_chars{0};
    std::vector<std::string> rules;
    std::size_t permutations{0};
    std::size_t shingle_size{0};
    double near_dup_threshold{0.0};
    std::string classifier;
    std::string classifier_cmd;
    std::string lexicon_path;
    std::string fallback;
    std::uint64_t cap_bytes{0};
    std::string separator;
    std::string case_variant;
    std::string variant;
    std::string manifest_path;
    std::uint64_t shuffle_seed{0};
    std::uint64_t seed{0};
    int workers{1};
    std::string accept_lang;
    std::string lang_mode;
    double heuristic_threshold{0.0};

    std::size_t k{10};
    std::size_t repetitions{1};
    std::string label_field{"category"};

    std::string dist_initial_path;
    std::string dist_after_dedup_path;
    std::string dist_final_path;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Io {
    std::ifstream fin;
    std::ofstream fout;
    std::istream* in{nullptr};
    std::ostream* out{nullptr};
};

void open_input(Io& io, const std::string& path) {
    if (path == "-") {
        io.in = &std::cin;
        return;
    }
    io.fin.open(path, std::ios::binary);
    if (!io.fin) throw InputError("cannot read " + path);
    io.in = &io.fin;
}

void open_output(Io& io, const std::string& path) {
    if (path == "-") {
        io.out = &std::cout;
        return;
    }
    io.fout.open(path, std::ios::binary | std::ios::trunc);
    if (!io.fout) throw InputError("cannot write " + path);
    io.out = &io.fout;
}

void finish_output(Io& io, const std::string& path) {
    io.out->flush();
    if (!*io.out) throw dc::StageError("output", "write failed: " + path);
}

void warn_line(std::uint64_t line, const std::string& message) {
    dc::log_warn("input line " + std::to_string(line) + ": " + message);
}

bool has(CLI::App* cmd, const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

dc::PipelineConfig effective_config(CLI::App* cmd, const Opts& o) {
    dc::PipelineConfig cfg;
    if (!o.config_path.empty()) {
        std::string text = read_file(o.config_path);
        try {
            cfg = dc::config_from_json(text);
        } catch (const std::exception& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
    }

    try {
        if (has(cmd, "--min-chars")) cfg.density.min_chars = o.min_chars;
        if (has(cmd, "--max-chars")) cfg.density.max_chars = o.max_chars;
        if (has(cmd, "--derive-thresholds")) cfg.derive_density = true;
        if (has(cmd, "--rules")) {
            cfg.mask_rules = o.rules;
            dc::MaskRuleSet::from_names(cfg.mask_rules);  // validate now, not mid-stage
        }
        if (has(cmd, "--permutations")) cfg.permutations = o.permutations;
        if (has(cmd, "--shingle-size")) cfg.shingle_size = o.shingle_size;
        if (has(cmd, "--near-dup-threshold")) cfg.near_dup_threshold = o.near_dup_threshold;
        if (has(cmd, "--classifier")) cfg.classifier = o.classifier;
        if (has(cmd, "--classifier-cmd")) cfg.classifier_command = o.classifier_cmd;
        if (has(cmd, "--lexicon")) {
            cfg.lexicon_json = read_file(o.lexicon_path);
            dc::lexicon_from_json(cfg.lexicon_json);  // validate
        }
        if (has(cmd, "--fallback")) cfg.fallback_category = o.fallback;
        if (has(cmd, "--cap-bytes")) cfg.cap_bytes = o.cap_bytes;
        if (has(cmd, "--separator")) cfg.separator = o.separator;
        if (has(cmd, "--case")) {
            if (o.case_variant != "cased" && o.case_variant != "uncased") {
                throw UsageError("--case must be cased or uncased");
            }
            cfg.uncased = o.case_variant == "uncased";
        }
        if (has(cmd, "--variant")) {
            if (o.variant != "raw" && o.variant != "preprocessed") {
                throw UsageError("--variant must be raw or preprocessed");
            }
            cfg.variant = o.variant;
        }
        if (has(cmd, "--seed")) cfg.seed = o.seed;
        if (has(cmd, "--workers")) {
            if (o.workers < 1) throw UsageError("--workers must be at least 1");
            cfg.workers = o.workers;
        }
        if (has(cmd, "--sidecar")) cfg.sidecar = true;
        if (has(cmd, "--accept-lang")) cfg.language.accept_lang = o.accept_lang;
        if (has(cmd, "--lang-mode")) {
            cfg.language.mode = dc::language_gate_mode_from_name(o.lang_mode);
        }
        if (has(cmd, "--heuristic-threshold")) {
            cfg.language.heuristic_threshold = o.heuristic_threshold;
        }
        if (has(cmd, "--no-language-gate")) cfg.language_gate = false;
        if (has(cmd, "--no-density-filter")) cfg.density_filter = false;
        if (has(cmd, "--no-dedup")) cfg.dedup = false;
        if (has(cmd, "--no-balance")) cfg.balance = false;
    } catch (const UsageError&) {
        throw;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

bool trail_has(const dc::PipelineTrail& trail, std::string_view stage) {
    for (const auto& rec : trail.stages) {
        if (rec.name == stage) return true;
    }
    return false;
}

dc::PipelineTrail load_trail(const std::string& path) {
    if (path.empty() || !std::filesystem::exists(path)) return {};
    try {
        return dc::trail_from_json(read_file(path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError("trail " + path + ": " + e.what());
    }
}

void save_trail(const std::string& path, const dc::PipelineTrail& trail) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path);
    out << dc::trail_to_json(trail);
}

// First subcommand of a chain records the ingest stage; later ones merely
// re-materialize pages that were already ingested.
std::vector<dc::PageRecord> cli_ingest(std::istream& in, const dc::PipelineConfig& cfg,
                                       dc::PipelineTrail& trail) {
    if (!trail_has(trail, "ingest")) return dc::stage_ingest(in, cfg, trail);
    return dc::load_pages(in, nullptr, warn_line);
}

json quartiles_json(const dc::CharCountQuartiles& q) {
    return {{"n", q.n},   {"min", q.min}, {"max", q.max},  {"q1", q.q1},
            {"q2", q.q2}, {"q3", q.q3},   {"mean", q.mean}};
}

json reduction_json(const dc::CategoryReduction& r) {
    return {{"bytes_initial", r.bytes_initial},
            {"bytes_after_dedup", r.bytes_after_dedup},
            {"bytes_final", r.bytes_final},
            {"dedup_rate_percent", dc::format_rate_percent(r.dedup_rate)},
            {"total_reduction_rate_percent", dc::format_rate_percent(r.total_reduction_rate)}};
}

int cmd_stats(CLI::App* cmd, const Opts& o) {
    (void)cmd;
    Io io;
    open_input(io, o.input);
    open_output(io, o.output);

    dc::LoadStats load;
    auto pages = dc::load_pages(*io.in, &load, warn_line);

    dc::CharCountAccumulator acc;
    dc::WordLengthHistogram histogram;
    dc::CategoryDistribution dist;
    for (const auto& page : pages) {
        acc.add(page.char_count);
        histogram.add_text(page.text);
        dist.add(page.category.empty() ? "(unclassified)" : page.category, page.text.size());
    }

    json hist = json::object();
    for (const auto& [length, count] : histogram.counts()) {
        hist[std::to_string(length)] = count;
    }

    json doc;
    doc["char_count_quartiles"] = quartiles_json(acc.finalize());
    doc["word_length_histogram"] = hist;
    doc["unique_words"] = histogram.unique_words();
    doc["category_distribution"] = json::parse(dc::distribution_to_json_text(dist));
    doc["load"] = {{"lines", load.lines},       {"input_bytes", load.input_bytes},
                   {"loaded", load.loaded},     {"skipped", load.skipped},
                   {"from_html", load.from_html}, {"from_text", load.from_text},
                   {"both_present", load.both_present}};

    if (!o.dist_initial_path.empty() || !o.dist_after_dedup_path.empty() ||
        !o.dist_final_path.empty()) {
        if (o.dist_initial_path.empty() || o.dist_after_dedup_path.empty() ||
            o.dist_final_path.empty()) {
            throw UsageError("reduction needs all of --dist-initial, --dist-after-dedup and "
                             "--dist-final");
        }
        dc::CategoryDistribution initial, after_dedup, final_dist;
        try {
            initial = dc::distribution_from_json_text(read_file(o.dist_initial_path));
            after_dedup = dc::distribution_from_json_text(read_file(o.dist_after_dedup_path));
            final_dist = dc::distribution_from_json_text(read_file(o.dist_final_path));
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(std::string("distribution file: ") + e.what());
        }
        dc::ReductionReport report = dc::reduction_report(initial, after_dedup, final_dist);
        json reduction = {{"overall", reduction_json(report.overall)},
                          {"per_category", json::object()}};
        for (const auto& [category, r] : report.categories) {
            reduction["per_category"][category] = reduction_json(r);
        }
        doc["reduction"] = reduction;
    }

    *io.out << doc.dump(2) << "\n";
    finish_output(io, o.output);
    return 0;
}

int cmd_filter(CLI::App* cmd, const Opts& o) {
    dc::PipelineConfig cfg = effective_config(cmd, o);
    dc::PipelineTrail trail = load_trail(o.trail_path);
    Io io;
    open_input(io, o.input);
    open_output(io, o.output);

    auto pages = cli_ingest(*io.in, cfg, trail);
    pages = dc::stage_density(std::move(pages), cfg, trail);
    dc::write_pages(*io.out, pages);
    finish_output(io, o.output);
    save_trail(o.trail_path, trail);
    return 0;
}

int cmd_mask(CLI::App* cmd, const Opts& o) {
    dc::PipelineConfig cfg = effective_config(cmd, o);
    dc::PipelineTrail trail = load_trail(o.trail_path);
    Io io;
    open_input(io, o.input);
    open_output(io, o.output);

    auto pages = cli_ingest(*io.in, cfg, trail);
    std::vector<dc::MaskReport> reports;
    pages = dc::stage_mask(std::move(pages), cfg, trail, &reports);

    for (std::size_t i = 0; i < pages.size(); ++i) {
        json doc = json::parse(dc::page_to_json(pages[i]));
        json replacements = json::object();
        for (const auto& [rule, count] : reports[i].replacements) replacements[rule] = count;
        doc["mask_report"] = {{"replacements", replacements},
                              {"chars_removed", reports[i].chars_removed},
                              {"bytes_before", reports[i].bytes_before},
                              {"bytes_after", reports[i].bytes_after}};
        *io.out << doc.dump() << '\n';
    }
    finish_output(io, o.output);
    save_trail(o.trail_path, trail);
    return 0;
}

int cmd_dedup(CLI::App* cmd, const Opts& o) {
    dc::PipelineConfig cfg = effective_config(cmd, o);
    dc::PipelineTrail trail = load_trail(o.trail_path);
    Io io;
    open_input(io, o.input);
    open_output(io, o.output);

    auto pages = cli_ingest(*io.in, cfg, trail);
    pages = dc::stage_dedup(std::move(pages), cfg, trail);
    dc::write_pages(*io.out, pages);
    finish_output(io, o.output);
    save_trail(o.trail_path, trail);
    return 0;
}

int cmd_balance(CLI::App* cmd, const Opts& o) {
    dc::PipelineConfig cfg = effective_config(cmd, o);
    dc::PipelineTrail trail = load_trail(o.trail_path);
    Io io;
    open_input(io, o.input);
    open_output(io, o.output);

    auto pages = cli_ingest(*io.in, cfg, trail);
    pages = dc::stage_balance(std::move(pages), cfg, trail);
    dc::write_pages(*io.out, pages);
    finish_output(io, o.output);
    save_trail(o.trail_path, trail);
    return 0;
}

int cmd_emit(CLI::App* cmd, const Opts& o) {
    dc::PipelineConfig cfg = effective_config(cmd, o);
    dc::PipelineTrail trail = load_trail(o.trail_path);
    Io io;
    open_input(io, o.input);
    open_output(io, o.output);

    auto pages = cli_ingest(*io.in, cfg, trail);
    // Pipeline order is the default; the corpus can be shuffled on request.
    const bool shuffled = has(cmd, "--shuffle-seed");
    if (shuffled) {
        std::mt19937_64 rng(o.shuffle_seed);
        std::shuffle(pages.begin(), pages.end(), rng);
    }
    dc::EmitTotals totals = dc::stage_emit(*io.out, pages, cfg, trail);
    if (shuffled && !trail.stages.empty()) {
        trail.stages.back().parameters["shuffle_seed"] = std::to_string(o.shuffle_seed);
    }
    finish_output(io, o.output);

    if (!o.manifest_path.empty()) {
        dc::CorpusManifest manifest = dc::assemble_manifest(trail, cfg, totals);
        std::ofstream out(o.manifest_path, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + o.manifest_path);
        dc::write_manifest(out, manifest);
        out.flush();
        if (!out) throw dc::StageError("emit", "manifest write failed");
    }
    save_trail(o.trail_path, trail);
    return 0;
}

int cmd_folds(CLI::App* cmd, const Opts& o) {
    (void)cmd;
    if (o.label_field != "category" && o.label_field != "lang") {
        throw UsageError("--label-field must be category or lang");
    }
    if (o.k < 2) throw UsageError("--k must be at least 2");
    if (o.repetitions < 1) throw UsageError("--repetitions must be at least 1");

    Io io;
    open_input(io, o.input);
    open_output(io, o.output);

    auto pages = dc::load_pages(*io.in, nullptr, warn_line);
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    ids.reserve(pages.size());
    labels.reserve(pages.size());
    for (const auto& page : pages) {
        ids.push_back(page.id);
        const std::string& label = o.label_field == "lang" ? page.lang : page.category;
        labels.push_back(label.empty() ? "(none)" : label);
    }

    std::vector<dc::FoldAssignment> assignments;
    if (o.repetitions == 1) {
        assignments.push_back(dc::stratified_kfold(labels, o.k, o.seed));
    } else {
        assignments = dc::repeated_kfold(labels, o.k, o.repetitions, o.seed);
    }

    json reps = json::array();
    for (const auto& assignment : assignments) {
        reps.push_back({{"repetition", assignment.repetition},
                        {"seed", assignment.seed},
                        {"fold_of", assignment.fold_of},
                        {"fold_sizes", assignment.fold_sizes()}});
    }
    json doc = {{"ids", ids},
                {"k", o.k},
                {"label_field", o.label_field},
                {"seed", o.seed},
                {"repetitions", reps}};
    *io.out << doc.dump(2) << "\n";
    finish_output(io, o.output);
    return 0;
}

int cmd_run(CLI::App* cmd, const Opts& o) {
    dc::PipelineConfig cfg = effective_config(cmd, o);
    if (o.output == "-") throw UsageError("run writes several files; --output must be a directory");

    Io io;
    open_input(io, o.input);

    dc::PipelineResult result = dc::run_pipeline(*io.in, o.output, cfg);
    dc::log_info("wrote " + std::to_string(result.pages_final) + " pages to " + o.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curate crawled pages into a clean training corpus"};
    app.set_version_flag("--version", std::string("darkcorpus ") + dc::kVersion);
    app.require_subcommand(1);

    Opts o;

    auto add_io = [&o](CLI::App* cmd, bool with_config, bool with_trail) {
        cmd->add_option("-i,--input", o.input, "pages to read (jsonl), - for stdin");
        cmd->add_option("-o,--output", o.output, "where to write, - for stdout");
        if (with_config) cmd->add_option("-c,--config", o.config_path, "pipeline config (json)");
        if (with_trail) {
            cmd->add_option("--trail", o.trail_path,
                            "stage trail json carried across chained subcommands");
        }
    };

    CLI::App* stats = app.add_subcommand("stats", "summarize pages: quartiles, histogram, labels");
    add_io(stats, false, false);
    stats->add_option("--dist-initial", o.dist_initial_path, "distribution json before dedup");
    stats->add_option("--dist-after-dedup", o.dist_after_dedup_path,
                      "distribution json after dedup");
    stats->add_option("--dist-final", o.dist_final_path, "distribution json after balancing");

    CLI::App* filter = app.add_subcommand("filter", "drop pages outside the length band");
    add_io(filter, true, true);
    filter->add_option("--min-chars", o.min_chars, "lower bound, inclusive");
    filter->add_option("--max-chars", o.max_chars, "upper bound, inclusive");
    filter->add_flag("--derive-thresholds", "use floor(q1/2) and 2*q3 of the input instead");

    CLI::App* mask = app.add_subcommand("mask", "replace identifiers with placeholder tokens");
    add_io(mask, true, true);
    mask->add_option("--rules", o.rules, "comma-separated rule names (default: all)")
        ->delimiter(',');

    CLI::App* dedup = app.add_subcommand("dedup", "drop pages with duplicate minhash signatures");
    add_io(dedup, true, true);
    dedup->add_option("--permutations", o.permutations, "signature length");
    dedup->add_option("--shingle-size", o.shingle_size, "words per shingle");
    dedup->add_option("--near-dup-threshold", o.near_dup_threshold,
                      "also drop near duplicates at or above this similarity");
    dedup->add_option("--seed", o.seed, "run seed; the stage derives its own from it");

    CLI::App* balance = app.add_subcommand("balance", "cap every category's byte share");
    add_io(balance, true, true);
    balance->add_option("--cap-bytes", o.cap_bytes, "per-category byte cap");
    balance->add_option("--seed", o.seed, "run seed; the stage derives its own from it");
    balance->add_option("--classifier", o.classifier, "label, keyword or exec");
    balance->add_option("--classifier-cmd", o.classifier_cmd, "shell command for exec");
    balance->add_option("--lexicon", o.lexicon_path, "keyword lexicon json file");
    balance->add_option("--fallback", o.fallback, "category when nothing matches");

    CLI::App* emit = app.add_subcommand("emit", "write the corpus text stream");
    add_io(emit, true, true);
    emit->add_option("--separator", o.separator, "page separator (default </s>)");
    emit->add_option("--case", o.case_variant, "cased or uncased");
    emit->add_option("--variant", o.variant, "raw or preprocessed (recorded in the manifest)");
    emit->add_option("--manifest", o.manifest_path, "also write a manifest json here");
    emit->add_option("--shuffle-seed", o.shuffle_seed,
                     "shuffle page order with this seed before writing");

    CLI::App* folds = app.add_subcommand("folds", "stratified cross-validation folds");
    add_io(folds, false, false);
    folds->add_option("--k", o.k, "number of folds (default 10)");
    folds->add_option("--repetitions", o.repetitions, "repeated k-fold count (default 1)");
    folds->add_option("--seed", o.seed, "shuffle seed");
    folds->add_option("--label-field", o.label_field, "category (default) or lang");

    CLI::App* run = app.add_subcommand("run", "run every stage and write a corpus directory");
    add_io(run, true, false);
    run->add_option("--variant", o.variant, "raw or preprocessed");
    run->add_option("--case", o.case_variant, "cased or uncased");
    run->add_option("--accept-lang", o.accept_lang, "language label to keep");
    run->add_option("--lang-mode", o.lang_mode, "trust_label, heuristic or accept_all");
    run->add_option("--heuristic-threshold", o.heuristic_threshold,
                    "language heuristic threshold");
    run->add_flag("--no-language-gate", "skip the language gate");
    run->add_option("--min-chars", o.min_chars, "density lower bound, inclusive");
    run->add_option("--max-chars", o.max_chars, "density upper bound, inclusive");
    run->add_flag("--derive-thresholds", "derive the density band from the gated pages");
    run->add_flag("--no-density-filter", "skip the density filter");
    run->add_option("--rules", o.rules, "mask rule names")->delimiter(',');
    run->add_option("--permutations", o.permutations, "minhash signature length");
    run->add_option("--shingle-size", o.shingle_size, "words per shingle");
    run->add_option("--near-dup-threshold", o.near_dup_threshold, "near-duplicate threshold");
    run->add_flag("--no-dedup", "skip deduplication");
    run->add_option("--classifier", o.classifier, "label, keyword or exec");
    run->add_option("--classifier-cmd", o.classifier_cmd, "shell command for exec");
    run->add_option("--lexicon", o.lexicon_path, "keyword lexicon json file");
    run->add_option("--fallback", o.fallback, "category when nothing matches");
    run->add_option("--cap-bytes", o.cap_bytes, "per-category byte cap");
    run->add_flag("--no-balance", "skip category balancing");
    run->add_option("--separator", o.separator, "page separator");
    run->add_option("--seed", o.seed, "run seed");
    run->add_option("--workers", o.workers, "threads for per-page stages");
    run->add_flag("--sidecar", "also write per-page dispositions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (stats->parsed()) return cmd_stats(stats, o);
        if (filter->parsed()) return cmd_filter(filter, o);
        if (mask->parsed()) return cmd_mask(mask, o);
        if (dedup->parsed()) return cmd_dedup(dedup, o);
        if (balance->parsed()) return cmd_balance(balance, o);
        if (emit->parsed()) return cmd_emit(emit, o);
        if (folds->parsed()) return cmd_folds(folds, o);
        if (run->parsed()) return cmd_run(run, o);
    } catch (const UsageError& e) {
        std::cerr << "darkcorpus: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "darkcorpus: " << e.what() << "\n";
        return 2;
    } catch (const dc::StageError& e) {
        std::cerr << "darkcorpus: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "darkcorpus: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
