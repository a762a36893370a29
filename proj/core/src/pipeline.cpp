#include "darkcorpus/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "darkcorpus/classify.hpp"
#include "darkcorpus/log.hpp"
#include "darkcorpus/mask.hpp"
#include "darkcorpus/stats.hpp"
#include "darkcorpus/text_util.hpp"
#include "darkcorpus/version.hpp"

using json = nlohmann::json;

namespace darkcorpus {

namespace {

std::uint64_t total_text_bytes(const std::vector<PageRecord>& pages) {
    std::uint64_t total = 0;
    for (const auto& page : pages) total += page.text.size();
    return total;
}

std::string u64_str(std::uint64_t v) { return std::to_string(v); }

std::string double_str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Runs fn(i) for every index, split across `workers` contiguous blocks.
// Results must not depend on the split; every fn writes only to its index.
template <typename Fn>
void parallel_indices(std::size_t n, int workers, const Fn& fn) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn]() {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

void capture_quartiles_if_missing(const std::vector<PageRecord>& pages, PipelineTrail& trail) {
    if (trail.have_quartiles) return;
    CharCountAccumulator acc;
    for (const auto& page : pages) acc.add(page.char_count);
    trail.quartiles = acc.finalize();
    trail.have_quartiles = true;
}

json quartiles_to_json(const CharCountQuartiles& q) {
    return {{"n", q.n},   {"min", q.min}, {"max", q.max},  {"q1", q.q1},
            {"q2", q.q2}, {"q3", q.q3},   {"mean", q.mean}};
}

CharCountQuartiles quartiles_from_json(const json& doc) {
    CharCountQuartiles q;
    q.n = doc.at("n").get<std::uint64_t>();
    q.min = doc.at("min").get<std::uint64_t>();
    q.max = doc.at("max").get<std::uint64_t>();
    q.q1 = doc.at("q1").get<std::uint64_t>();
    q.q2 = doc.at("q2").get<std::uint64_t>();
    q.q3 = doc.at("q3").get<std::uint64_t>();
    q.mean = doc.at("mean").get<double>();
    return q;
}

json dist_to_json(const CategoryDistribution& dist) {
    json bytes = json::object();
    json pages = json::object();
    for (const auto& [category, b] : dist.bytes) bytes[category] = b;
    for (const auto& [category, p] : dist.pages) pages[category] = p;
    return {{"bytes", bytes}, {"pages", pages}};
}

CategoryDistribution dist_from_json(const json& doc) {
    CategoryDistribution dist;
    for (const auto& [category, b] : doc.at("bytes").items()) {
        dist.bytes[category] = b.get<std::uint64_t>();
    }
    for (const auto& [category, p] : doc.at("pages").items()) {
        dist.pages[category] = p.get<std::uint64_t>();
    }
    return dist;
}

json stage_to_json(const StageRecord& stage) {
    json params = json::object();
    for (const auto& [key, value] : stage.parameters) params[key] = value;
    return {{"name", stage.name},         {"pages_in", stage.pages_in},
            {"pages_out", stage.pages_out}, {"bytes_in", stage.bytes_in},
            {"bytes_out", stage.bytes_out}, {"parameters", params}};
}

StageRecord stage_from_json(const json& doc) {
    StageRecord stage;
    stage.name = doc.at("name").get<std::string>();
    stage.pages_in = doc.at("pages_in").get<std::uint64_t>();
    stage.pages_out = doc.at("pages_out").get<std::uint64_t>();
    stage.bytes_in = doc.at("bytes_in").get<std::uint64_t>();
    stage.bytes_out = doc.at("bytes_out").get<std::uint64_t>();
    for (const auto& [key, value] : doc.at("parameters").items()) {
        stage.parameters[key] = value.get<std::string>();
    }
    return stage;
}

}  // namespace

std::uint64_t stage_seed(std::uint64_t master_seed, std::string_view stage) {
    return splitmix64(master_seed ^ hash64(stage));
}

PipelineConfig config_from_json(const std::string& json_text) {
    json doc = json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

    PipelineConfig cfg;
    auto want = [](const json& v, bool ok, const char* key, const char* type) {
        if (!ok) {
            throw std::invalid_argument(std::string("config key \"") + key + "\" must be " + type);
        }
        (void)v;
    };
    for (const auto& [key, value] : doc.items()) {
        if (key == "variant") {
            want(value, value.is_string(), "variant", "a string");
            cfg.variant = value.get<std::string>();
        } else if (key == "uncased") {
            want(value, value.is_boolean(), "uncased", "a boolean");
            cfg.uncased = value.get<bool>();
        } else if (key == "language_gate") {
            want(value, value.is_boolean(), "language_gate", "a boolean");
            cfg.language_gate = value.get<bool>();
        } else if (key == "language_mode") {
            want(value, value.is_string(), "language_mode", "a string");
            cfg.language.mode = language_gate_mode_from_name(value.get<std::string>());
        } else if (key == "accept_lang") {
            want(value, value.is_string(), "accept_lang", "a string");
            cfg.language.accept_lang = value.get<std::string>();
        } else if (key == "heuristic_threshold") {
            want(value, value.is_number(), "heuristic_threshold", "a number");
            cfg.language.heuristic_threshold = value.get<double>();
        } else if (key == "density_filter") {
            want(value, value.is_boolean(), "density_filter", "a boolean");
            cfg.density_filter = value.get<bool>();
        } else if (key == "derive_density") {
            want(value, value.is_boolean(), "derive_density", "a boolean");
            cfg.derive_density = value.get<bool>();
        } else if (key == "min_chars") {
            want(value, value.is_number_unsigned(), "min_chars", "a nonnegative integer");
            cfg.density.min_chars = value.get<std::uint64_t>();
        } else if (key == "max_chars") {
            want(value, value.is_number_unsigned(), "max_chars", "a nonnegative integer");
            cfg.density.max_chars = value.get<std::uint64_t>();
        } else if (key == "mask_rules") {
            want(value, value.is_array(), "mask_rules", "an array of rule names");
            cfg.mask_rules.clear();
            for (const auto& name : value) {
                want(name, name.is_string(), "mask_rules", "an array of rule names");
                cfg.mask_rules.push_back(name.get<std::string>());
            }
        } else if (key == "dedup") {
            want(value, value.is_boolean(), "dedup", "a boolean");
            cfg.dedup = value.get<bool>();
        } else if (key == "shingle_size") {
            want(value, value.is_number_unsigned(), "shingle_size", "a positive integer");
            cfg.shingle_size = value.get<std::size_t>();
        } else if (key == "permutations") {
            want(value, value.is_number_unsigned(), "permutations", "a positive integer");
            cfg.permutations = value.get<std::size_t>();
        } else if (key == "near_dup_threshold") {
            want(value, value.is_number(), "near_dup_threshold", "a number");
            cfg.near_dup_threshold = value.get<double>();
        } else if (key == "classifier") {
            want(value, value.is_string(), "classifier", "a string");
            cfg.classifier = value.get<std::string>();
        } else if (key == "classifier_command") {
            want(value, value.is_string(), "classifier_command", "a string");
            cfg.classifier_command = value.get<std::string>();
        } else if (key == "lexicon") {
            want(value, value.is_object(), "lexicon", "an object");
            cfg.lexicon_json = value.dump();
        } else if (key == "fallback_category") {
            want(value, value.is_string(), "fallback_category", "a string");
            cfg.fallback_category = value.get<std::string>();
        } else if (key == "balance") {
            want(value, value.is_boolean(), "balance", "a boolean");
            cfg.balance = value.get<bool>();
        } else if (key == "cap_bytes") {
            want(value, value.is_number_unsigned(), "cap_bytes", "a positive integer");
            cfg.cap_bytes = value.get<std::uint64_t>();
        } else if (key == "separator") {
            want(value, value.is_string(), "separator", "a string");
            cfg.separator = value.get<std::string>();
        } else if (key == "seed") {
            want(value, value.is_number_unsigned(), "seed", "a nonnegative integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "workers") {
            want(value, value.is_number_unsigned(), "workers", "a positive integer");
            cfg.workers = value.get<int>();
        } else if (key == "sidecar") {
            want(value, value.is_boolean(), "sidecar", "a boolean");
            cfg.sidecar = value.get<bool>();
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }

    if (cfg.variant != "raw" && cfg.variant != "preprocessed") {
        throw std::invalid_argument("variant must be \"raw\" or \"preprocessed\"");
    }
    if (cfg.classifier != "label" && cfg.classifier != "keyword" && cfg.classifier != "exec") {
        throw std::invalid_argument("classifier must be label, keyword or exec");
    }
    if (!is_activity_category(cfg.fallback_category)) {
        throw std::invalid_argument("fallback_category is not one of the nine labels");
    }
    if (!cfg.mask_rules.empty()) MaskRuleSet::from_names(cfg.mask_rules);  // validates
    if (cfg.shingle_size == 0) throw std::invalid_argument("shingle_size must be at least 1");
    if (cfg.permutations == 0) throw std::invalid_argument("permutations must be at least 1");
    if (cfg.near_dup_threshold < 0.0 || cfg.near_dup_threshold > 1.0) {
        throw std::invalid_argument("near_dup_threshold must lie in [0, 1]");
    }
    if (cfg.workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (cfg.separator.empty()) throw std::invalid_argument("separator must not be empty");
    if (!cfg.lexicon_json.empty()) lexicon_from_json(cfg.lexicon_json);  // validates
    return cfg;
}

std::string config_to_json(const PipelineConfig& cfg) {
    json doc;
    doc["variant"] = cfg.variant;
    doc["uncased"] = cfg.uncased;
    doc["language_gate"] = cfg.language_gate;
    doc["language_mode"] = std::string(language_gate_mode_name(cfg.language.mode));
    doc["accept_lang"] = cfg.language.accept_lang;
    doc["heuristic_threshold"] = cfg.language.heuristic_threshold;
    doc["density_filter"] = cfg.density_filter;
    doc["derive_density"] = cfg.derive_density;
    doc["min_chars"] = cfg.density.min_chars;
    doc["max_chars"] = cfg.density.max_chars;
    doc["mask_rules"] = cfg.mask_rules;
    doc["dedup"] = cfg.dedup;
    doc["shingle_size"] = cfg.shingle_size;
    doc["permutations"] = cfg.permutations;
    doc["near_dup_threshold"] = cfg.near_dup_threshold;
    doc["classifier"] = cfg.classifier;
    doc["classifier_command"] = cfg.classifier_command;
    doc["lexicon"] =
        cfg.lexicon_json.empty() ? json::object() : json::parse(cfg.lexicon_json);
    doc["fallback_category"] = cfg.fallback_category;
    doc["balance"] = cfg.balance;
    doc["cap_bytes"] = cfg.cap_bytes;
    doc["separator"] = cfg.separator;
    doc["seed"] = cfg.seed;
    doc["workers"] = cfg.workers;
    doc["sidecar"] = cfg.sidecar;
    return doc.dump();
}

std::string trail_to_json(const PipelineTrail& trail) {
    json doc;
    json stages = json::array();
    for (const auto& stage : trail.stages) stages.push_back(stage_to_json(stage));
    doc["stages"] = stages;
    if (trail.have_quartiles) doc["quartiles"] = quartiles_to_json(trail.quartiles);
    if (trail.have_initial) doc["dist_initial"] = dist_to_json(trail.dist_initial);
    if (trail.have_after_dedup) doc["dist_after_dedup"] = dist_to_json(trail.dist_after_dedup);
    if (trail.have_final) doc["dist_final"] = dist_to_json(trail.dist_final);
    return doc.dump() + "\n";
}

PipelineTrail trail_from_json(const std::string& json_text) {
    json doc = json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("trail must be a JSON object");
    PipelineTrail trail;
    if (doc.contains("stages")) {
        for (const auto& stage : doc["stages"]) trail.stages.push_back(stage_from_json(stage));
    }
    if (doc.contains("quartiles")) {
        trail.quartiles = quartiles_from_json(doc["quartiles"]);
        trail.have_quartiles = true;
    }
    if (doc.contains("dist_initial")) {
        trail.dist_initial = dist_from_json(doc["dist_initial"]);
        trail.have_initial = true;
    }
    if (doc.contains("dist_after_dedup")) {
        trail.dist_after_dedup = dist_from_json(doc["dist_after_dedup"]);
        trail.have_after_dedup = true;
    }
    if (doc.contains("dist_final")) {
        trail.dist_final = dist_from_json(doc["dist_final"]);
        trail.have_final = true;
    }
    return trail;
}

std::vector<PageRecord> stage_ingest(std::istream& in, const PipelineConfig& config,
                                     PipelineTrail& trail, LoadStats* stats_out) {
    (void)config;
    LoadStats stats;
    auto pages = load_pages(in, &stats, [](std::uint64_t line, const std::string& message) {
        log_warn("input line " + std::to_string(line) + ": " + message);
    });

    StageRecord rec;
    rec.name = "ingest";
    rec.pages_in = stats.lines;
    rec.pages_out = stats.loaded;
    rec.bytes_in = stats.input_bytes;
    rec.bytes_out = total_text_bytes(pages);
    rec.parameters["from_html"] = u64_str(stats.from_html);
    rec.parameters["from_text"] = u64_str(stats.from_text);
    rec.parameters["both_present"] = u64_str(stats.both_present);
    rec.parameters["skipped"] = u64_str(stats.skipped);
    trail.stages.push_back(std::move(rec));

    if (stats_out) *stats_out = stats;
    return pages;
}

std::vector<PageRecord> stage_language_gate(std::vector<PageRecord> pages,
                                            const PipelineConfig& config, PipelineTrail& trail,
                                            std::vector<PageRecord>* dropped) {
    StageRecord rec;
    rec.name = "language_gate";
    rec.pages_in = pages.size();
    rec.bytes_in = total_text_bytes(pages);

    std::vector<PageRecord> kept;
    kept.reserve(pages.size());
    std::uint64_t unlabeled = 0;
    for (auto& page : pages) {
        GateDecision decision = language_gate(page, config.language);
        if (decision.unlabeled) ++unlabeled;
        if (decision.keep) {
            kept.push_back(std::move(page));
        } else if (dropped) {
            page.status = "dropped:language_gate";
            dropped->push_back(std::move(page));
        }
    }

    rec.pages_out = kept.size();
    rec.bytes_out = total_text_bytes(kept);
    rec.parameters["mode"] = std::string(language_gate_mode_name(config.language.mode));
    rec.parameters["accept_lang"] = config.language.accept_lang;
    rec.parameters["threshold"] = double_str(config.language.heuristic_threshold);
    rec.parameters["unlabeled"] = u64_str(unlabeled);
    trail.stages.push_back(std::move(rec));
    return kept;
}

std::vector<PageRecord> stage_density(std::vector<PageRecord> pages, const PipelineConfig& config,
                                      PipelineTrail& trail, std::vector<PageRecord>* dropped) {
    capture_quartiles_if_missing(pages, trail);

    DensityThresholds thresholds = config.density;
    if (config.derive_density) {
        try {
            thresholds = derive_thresholds(trail.quartiles);
        } catch (const std::exception& e) {
            throw StageError("density_filter", e.what());
        }
    }

    StageRecord rec;
    rec.name = "density_filter";
    rec.pages_in = pages.size();
    rec.bytes_in = total_text_bytes(pages);

    DensityOutcome outcome = filter_by_density(std::move(pages), thresholds, dropped);

    rec.pages_out = outcome.kept.size();
    rec.bytes_out = total_text_bytes(outcome.kept);
    rec.parameters["min_chars"] = u64_str(thresholds.min_chars);
    rec.parameters["max_chars"] = u64_str(thresholds.max_chars);
    rec.parameters["derived"] = config.derive_density ? "true" : "false";
    rec.parameters["dropped_short"] = u64_str(outcome.dropped_short);
    rec.parameters["dropped_long"] = u64_str(outcome.dropped_long);
    trail.stages.push_back(std::move(rec));
    return outcome.kept;
}

std::vector<PageRecord> stage_mask(std::vector<PageRecord> pages, const PipelineConfig& config,
                                   PipelineTrail& trail, std::vector<MaskReport>* page_reports) {
    capture_quartiles_if_missing(pages, trail);
    MaskRuleSet rules =
        config.mask_rules.empty() ? MaskRuleSet() : MaskRuleSet::from_names(config.mask_rules);

    StageRecord rec;
    rec.name = "mask";
    rec.pages_in = pages.size();
    rec.bytes_in = total_text_bytes(pages);

    std::vector<MaskReport> reports(pages.size());
    parallel_indices(pages.size(), config.workers, [&](std::size_t i) {
        pages[i].text = apply_masks(pages[i].text, rules, &reports[i]);
        pages[i].char_count = utf8_char_count(pages[i].text);
    });

    MaskReport total;
    for (const auto& report : reports) {
        for (const auto& [rule, count] : report.replacements) total.replacements[rule] += count;
        total.chars_removed += report.chars_removed;
    }

    rec.pages_out = pages.size();
    rec.bytes_out = total_text_bytes(pages);
    std::string names;
    for (MaskRule rule : rules.rules()) {
        if (!names.empty()) names.push_back(',');
        names += std::string(mask_rule_name(rule));
    }
    rec.parameters["rules"] = names;
    for (const auto& [rule, count] : total.replacements) {
        rec.parameters["replaced_" + rule] = u64_str(count);
    }
    rec.parameters["chars_removed"] = u64_str(total.chars_removed);
    trail.stages.push_back(std::move(rec));
    if (page_reports) *page_reports = std::move(reports);
    return pages;
}

void ensure_categories(std::vector<PageRecord>& pages, const PipelineConfig& config) {
    if (pages.empty()) return;
    bool all_labeled = std::all_of(pages.begin(), pages.end(), [](const PageRecord& page) {
        return is_activity_category(page.category);
    });
    if (all_labeled) return;

    std::unique_ptr<Classifier> classifier;
    try {
        if (config.classifier == "label") {
            classifier = make_label_classifier(config.fallback_category);
        } else if (config.classifier == "keyword") {
            Lexicon lexicon = config.lexicon_json.empty() ? default_lexicon()
                                                          : lexicon_from_json(config.lexicon_json);
            classifier = make_keyword_classifier(std::move(lexicon), config.fallback_category);
        } else if (config.classifier == "exec") {
            if (config.classifier_command.empty()) {
                throw std::invalid_argument("exec classifier needs classifier_command");
            }
            classifier = make_exec_classifier(config.classifier_command, config.fallback_category);
        } else {
            throw std::invalid_argument("unknown classifier: " + config.classifier);
        }
        classifier->classify(pages);
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError("classify", e.what());
    }
}

std::vector<PageRecord> stage_dedup(std::vector<PageRecord> pages, const PipelineConfig& config,
                                    PipelineTrail& trail, std::vector<PageRecord>* dropped) {
    capture_quartiles_if_missing(pages, trail);
    ensure_categories(pages, config);
    if (!trail.have_initial) {
        trail.dist_initial = category_distribution(pages);
        trail.have_initial = true;
    }

    DedupOptions options;
    options.shingle_size = config.shingle_size;
    options.num_permutations = config.permutations;
    options.seed = stage_seed(config.seed, "dedup");
    options.near_dup_threshold = config.near_dup_threshold;

    StageRecord rec;
    rec.name = "dedup";
    rec.pages_in = pages.size();
    rec.bytes_in = total_text_bytes(pages);

    MinHashFamily family(options.num_permutations, options.seed);
    std::vector<std::vector<std::uint64_t>> signatures(pages.size());
    parallel_indices(pages.size(), config.workers, [&](std::size_t i) {
        signatures[i] = family.signature_of_text(pages[i].text, options.shingle_size);
    });

    DedupOutcome outcome = dedup(std::move(pages), options, &signatures, dropped);

    trail.dist_after_dedup = category_distribution(outcome.kept);
    trail.have_after_dedup = true;

    rec.pages_out = outcome.kept.size();
    rec.bytes_out = total_text_bytes(outcome.kept);
    rec.parameters["permutations"] = u64_str(options.num_permutations);
    rec.parameters["shingle_size"] = u64_str(options.shingle_size);
    rec.parameters["seed"] = u64_str(options.seed);
    rec.parameters["near_dup_threshold"] = double_str(options.near_dup_threshold);
    rec.parameters["dropped_exact"] = u64_str(outcome.dropped_exact);
    rec.parameters["dropped_near"] = u64_str(outcome.dropped_near);
    rec.parameters["classifier"] = config.classifier;
    trail.stages.push_back(std::move(rec));
    return outcome.kept;
}

std::vector<PageRecord> stage_balance(std::vector<PageRecord> pages, const PipelineConfig& config,
                                      PipelineTrail& trail, std::vector<PageRecord>* dropped) {
    ensure_categories(pages, config);
    if (!trail.have_initial) {
        trail.dist_initial = category_distribution(pages);
        trail.have_initial = true;
    }
    if (!trail.have_after_dedup) {
        trail.dist_after_dedup = category_distribution(pages);
        trail.have_after_dedup = true;
    }

    BalanceOptions options;
    options.cap_bytes = config.cap_bytes;
    options.seed = stage_seed(config.seed, "balance");

    StageRecord rec;
    rec.name = "balance";
    rec.pages_in = pages.size();
    rec.bytes_in = total_text_bytes(pages);

    BalanceOutcome outcome = balance_categories(std::move(pages), options, dropped);

    trail.dist_final = category_distribution(outcome.kept);
    trail.have_final = true;

    rec.pages_out = outcome.kept.size();
    rec.bytes_out = total_text_bytes(outcome.kept);
    rec.parameters["cap_bytes"] = u64_str(options.cap_bytes);
    rec.parameters["seed"] = u64_str(options.seed);
    rec.parameters["classifier"] = config.classifier;
    rec.parameters["fallback_category"] = config.fallback_category;
    rec.parameters["removed_pages"] = u64_str(outcome.total_removed_pages());
    trail.stages.push_back(std::move(rec));
    return outcome.kept;
}

EmitTotals stage_emit(std::ostream& corpus_out, std::vector<PageRecord>& pages,
                      const PipelineConfig& config, PipelineTrail& trail) {
    capture_quartiles_if_missing(pages, trail);
    ensure_categories(pages, config);
    if (!trail.have_initial) {
        trail.dist_initial = category_distribution(pages);
        trail.have_initial = true;
    }
    if (!trail.have_after_dedup) {
        trail.dist_after_dedup = category_distribution(pages);
        trail.have_after_dedup = true;
    }
    if (!trail.have_final) {
        trail.dist_final = category_distribution(pages);
        trail.have_final = true;
    }

    StageRecord rec;
    rec.name = "emit";
    rec.pages_in = pages.size();
    rec.bytes_in = total_text_bytes(pages);

    EmitOptions options;
    options.separator = config.separator;
    options.uncased = config.uncased;
    EmitTotals totals;
    try {
        totals = emit_corpus(corpus_out, pages, options);
    } catch (const std::exception& e) {
        throw StageError("emit", e.what());
    }
    if (!corpus_out) throw StageError("emit", "corpus write failed");

    rec.pages_out = totals.pages;
    rec.bytes_out = totals.bytes;
    rec.parameters["separator"] = config.separator;
    rec.parameters["case"] = config.uncased ? "uncased" : "cased";
    rec.parameters["variant"] = config.variant;
    rec.parameters["escapes"] = u64_str(totals.separator_escapes);
    trail.stages.push_back(std::move(rec));
    return totals;
}

CorpusManifest assemble_manifest(const PipelineTrail& trail, const PipelineConfig& config,
                                 const EmitTotals& totals) {
    CorpusManifest manifest;
    manifest.tool_version = kVersion;
    manifest.variant = config.variant;
    manifest.case_variant = config.uncased ? "uncased" : "cased";
    manifest.separator = config.separator;
    manifest.seed = config.seed;
    manifest.totals = totals;
    manifest.stages = trail.stages;
    manifest.quartiles = trail.quartiles;
    manifest.reduction =
        reduction_report(trail.dist_initial, trail.dist_after_dedup, trail.dist_final);
    manifest.final_distribution = trail.dist_final;
    manifest.config_json = config_to_json(config);
    return manifest;
}

namespace {

void write_stamp(const std::filesystem::path& out_dir, const char* status) {
    std::ofstream out(out_dir / "status.json", std::ios::binary | std::ios::trunc);
    json doc = {{"status", status}, {"version", kVersion}};
    out << doc.dump(2) << "\n";
    if (!out) throw StageError("setup", "cannot write status stamp in " + out_dir.string());
}

// Sidecar keeps dispositions, not content; free the text of dropped pages
// as soon as a stage hands them over.
void strip_dropped_text(std::vector<PageRecord>& dropped, std::size_t from) {
    for (std::size_t i = from; i < dropped.size(); ++i) {
        dropped[i].text = std::string();
    }
}

void write_sidecar(std::ostream& out, const std::vector<PageRecord>& dropped,
                   const std::vector<PageRecord>& kept) {
    auto line = [&out](const PageRecord& page) {
        json doc;
        doc["id"] = page.id;
        doc["url"] = page.url;
        doc["status"] = page.status;
        if (!page.category.empty()) doc["category"] = page.category;
        out << doc.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    };
    for (const auto& page : dropped) line(page);
    for (const auto& page : kept) line(page);
}

void write_stats_file(std::ostream& out, const std::vector<PageRecord>& pages,
                      const PipelineTrail& trail, const LoadStats& load) {
    CharCountAccumulator acc;
    WordLengthHistogram histogram;
    for (const auto& page : pages) {
        acc.add(page.char_count);
        histogram.add_text(page.text);
    }

    json hist = json::object();
    for (const auto& [length, count] : histogram.counts()) hist[u64_str(length)] = count;

    json doc;
    doc["char_count_quartiles_ingest"] = quartiles_to_json(trail.quartiles);
    doc["char_count_quartiles_final"] = quartiles_to_json(acc.finalize());
    doc["word_length_histogram"] = hist;
    doc["unique_words"] = histogram.unique_words();
    doc["category_distribution"] = dist_to_json(trail.dist_final);
    doc["load"] = {{"lines", load.lines},
                   {"input_bytes", load.input_bytes},
                   {"loaded", load.loaded},
                   {"skipped", load.skipped},
                   {"from_html", load.from_html},
                   {"from_text", load.from_text},
                   {"both_present", load.both_present}};
    out << doc.dump(2) << "\n";
}

}  // namespace

PipelineResult run_pipeline(std::istream& input, const std::filesystem::path& out_dir,
                            const PipelineConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw StageError("setup", "cannot create output directory " + out_dir.string());
    write_stamp(out_dir, "incomplete");

    PipelineTrail trail;
    PipelineResult result;
    std::vector<PageRecord> dropped;
    std::vector<PageRecord>* dropped_ptr = config.sidecar ? &dropped : nullptr;
    auto free_new_dropped = [&dropped](std::size_t from) { strip_dropped_text(dropped, from); };

    std::vector<PageRecord> pages = stage_ingest(input, config, trail, &result.load);
    if (config.language_gate) {
        std::size_t mark = dropped.size();
        pages = stage_language_gate(std::move(pages), config, trail, dropped_ptr);
        free_new_dropped(mark);
    }
    if (config.density_filter) {
        std::size_t mark = dropped.size();
        pages = stage_density(std::move(pages), config, trail, dropped_ptr);
        free_new_dropped(mark);
    }
    if (config.variant == "preprocessed") {
        pages = stage_mask(std::move(pages), config, trail);
    }
    if (config.dedup) {
        std::size_t mark = dropped.size();
        pages = stage_dedup(std::move(pages), config, trail, dropped_ptr);
        free_new_dropped(mark);
    }
    if (config.balance) {
        std::size_t mark = dropped.size();
        pages = stage_balance(std::move(pages), config, trail, dropped_ptr);
        free_new_dropped(mark);
    }

    std::filesystem::path corpus_path = out_dir / "corpus.txt";
    {
        std::ofstream corpus(corpus_path, std::ios::binary | std::ios::trunc);
        if (!corpus) throw StageError("emit", "cannot write " + corpus_path.string());
        EmitTotals totals = stage_emit(corpus, pages, config, trail);
        result.manifest = assemble_manifest(trail, config, totals);
        corpus.flush();
        if (!corpus) throw StageError("emit", "corpus write failed");
    }
    result.outputs.push_back(corpus_path);

    std::filesystem::path manifest_path = out_dir / "manifest.json";
    {
        std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
        if (!out) throw StageError("emit", "cannot write " + manifest_path.string());
        write_manifest(out, result.manifest);
        out.flush();
        if (!out) throw StageError("emit", "manifest write failed");
    }
    result.outputs.push_back(manifest_path);

    std::filesystem::path stats_path = out_dir / "stats.json";
    {
        std::ofstream out(stats_path, std::ios::binary | std::ios::trunc);
        if (!out) throw StageError("emit", "cannot write " + stats_path.string());
        write_stats_file(out, pages, trail, result.load);
        out.flush();
        if (!out) throw StageError("emit", "stats write failed");
    }
    result.outputs.push_back(stats_path);

    if (config.sidecar) {
        std::filesystem::path sidecar_path = out_dir / "sidecar.jsonl";
        std::ofstream out(sidecar_path, std::ios::binary | std::ios::trunc);
        if (!out) throw StageError("emit", "cannot write " + sidecar_path.string());
        write_sidecar(out, dropped, pages);
        out.flush();
        if (!out) throw StageError("emit", "sidecar write failed");
        result.outputs.push_back(sidecar_path);
    }

    result.pages_final = pages.size();
    write_stamp(out_dir, "complete");
    result.outputs.push_back(out_dir / "status.json");
    return result;
}

}  // namespace darkcorpus
