#include "darkcorpus/emit.hpp"

#include <stdexcept>

#include <json.hpp>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

std::string case_fold(std::string_view text) { return lower_latin1(text); }

std::string escape_separator(std::string_view text, std::string_view separator,
                             std::uint64_t* escapes) {
    if (separator.empty()) return std::string(text);
    std::string escaped(separator);
    escaped.insert(1, 1, ' ');
    if (escaped.find(separator) != std::string::npos) {
        // e.g. a single byte or a run of spaces: the escaped form still
        // contains the separator, so no rewrite can ever be clean
        throw std::invalid_argument("separator cannot be escaped out of page text");
    }

    std::string out(text);
    for (int pass = 0; pass < 64; ++pass) {
        bool dirty = false;
        std::size_t pos = 0;
        while ((pos = out.find(separator, pos)) != std::string::npos) {
            out.replace(pos, separator.size(), escaped);
            pos += escaped.size();
            dirty = true;
            if (escapes) ++*escapes;
        }
        if (!dirty) return out;
    }
    // a separator whose escape spawns new occurrences every pass (for
    // example a run of spaces) can never be made safe
    throw std::runtime_error("separator cannot be escaped out of page text");
}

EmitTotals emit_corpus(std::ostream& out, const std::vector<PageRecord>& pages,
                       const EmitOptions& options) {
    EmitTotals totals;
    for (const auto& page : pages) {
        if (totals.pages > 0) {
            out.write(options.separator.data(),
                      static_cast<std::streamsize>(options.separator.size()));
            totals.bytes += options.separator.size();
        }
        // fold first: folding may rewrite bytes, so escaping must see the
        // final text (a literal "</S>" folds into the separator)
        std::string chunk = options.uncased ? case_fold(page.text) : page.text;
        chunk = escape_separator(chunk, options.separator, &totals.separator_escapes);
        out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
        totals.bytes += chunk.size();
        totals.pages += 1;
    }
    return totals;
}

namespace {

nlohmann::json quartiles_to_json(const CharCountQuartiles& q) {
    return {{"n", q.n},   {"min", q.min}, {"max", q.max},  {"q1", q.q1},
            {"q2", q.q2}, {"q3", q.q3},   {"mean", q.mean}};
}

nlohmann::json reduction_to_json(const CategoryReduction& r) {
    return {{"bytes_initial", r.bytes_initial},
            {"bytes_after_dedup", r.bytes_after_dedup},
            {"bytes_final", r.bytes_final},
            {"dedup_rate_percent", format_rate_percent(r.dedup_rate)},
            {"total_reduction_rate_percent", format_rate_percent(r.total_reduction_rate)}};
}

nlohmann::json distribution_to_json(const CategoryDistribution& dist) {
    nlohmann::json bytes = nlohmann::json::object();
    nlohmann::json pages = nlohmann::json::object();
    for (const auto& [category, b] : dist.bytes) bytes[category] = b;
    for (const auto& [category, p] : dist.pages) pages[category] = p;
    return {{"bytes", bytes}, {"pages", pages}};
}

}  // namespace

std::string manifest_to_json(const CorpusManifest& manifest) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& stage : manifest.stages) {
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [key, value] : stage.parameters) params[key] = value;
        stages.push_back({{"name", stage.name},
                          {"pages_in", stage.pages_in},
                          {"pages_out", stage.pages_out},
                          {"bytes_in", stage.bytes_in},
                          {"bytes_out", stage.bytes_out},
                          {"parameters", params}});
    }

    nlohmann::json reduction = {{"overall", reduction_to_json(manifest.reduction.overall)},
                                {"per_category", nlohmann::json::object()}};
    for (const auto& [category, r] : manifest.reduction.categories) {
        reduction["per_category"][category] = reduction_to_json(r);
    }

    nlohmann::json config = nlohmann::json::object();
    if (!manifest.config_json.empty()) {
        config = nlohmann::json::parse(manifest.config_json, nullptr, false);
        if (config.is_discarded()) config = manifest.config_json;  // keep it verbatim
    }

    nlohmann::json doc = {{"version", manifest.tool_version},
                          {"variant", manifest.variant},
                          {"case", manifest.case_variant},
                          {"separator", manifest.separator},
                          {"seed", manifest.seed},
                          {"totals",
                           {{"pages", manifest.totals.pages},
                            {"bytes", manifest.totals.bytes},
                            {"separator_escapes", manifest.totals.separator_escapes}}},
                          {"stages", stages},
                          {"char_count_quartiles", quartiles_to_json(manifest.quartiles)},
                          {"reduction", reduction},
                          {"final_distribution", distribution_to_json(manifest.final_distribution)},
                          {"config", config}};
    return doc.dump(2) + "\n";
}

void write_manifest(std::ostream& out, const CorpusManifest& manifest) {
    std::string text = manifest_to_json(manifest);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace darkcorpus
