#include "darkcorpus/jsonl.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "darkcorpus/html_text.hpp"
#include "darkcorpus/mask.hpp"
#include "darkcorpus/text_util.hpp"

using json = nlohmann::json;

namespace darkcorpus {

namespace {

void warn_at(const WarnFn& warn, std::uint64_t line, const std::string& message) {
    if (warn) warn(line, message);
}

std::string default_id(std::uint64_t line) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "p%06llu", static_cast<unsigned long long>(line));
    return buf;
}

}  // namespace

std::vector<PageRecord> load_pages(std::istream& in, LoadStats* stats, const WarnFn& warn) {
    std::vector<PageRecord> pages;
    LoadStats local;
    std::string line;
    while (std::getline(in, line)) {
        ++local.lines;
        local.input_bytes += line.size() + 1;
        if (line.empty()) continue;

        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            ++local.skipped;
            warn_at(warn, local.lines, "not a json object, skipped");
            continue;
        }
        if (!doc.contains("url") || !doc["url"].is_string()) {
            ++local.skipped;
            warn_at(warn, local.lines, "missing url, skipped");
            continue;
        }

        bool has_html = doc.contains("html") && doc["html"].is_string();
        bool has_text = doc.contains("text") && doc["text"].is_string();
        if (!has_html && !has_text) {
            ++local.skipped;
            warn_at(warn, local.lines, "neither html nor text, skipped");
            continue;
        }

        PageRecord page;
        page.url = doc["url"].get<std::string>();
        page.id = doc.contains("id") && doc["id"].is_string() ? doc["id"].get<std::string>()
                                                              : default_id(local.lines);
        if (doc.contains("lang") && doc["lang"].is_string()) page.lang = doc["lang"];
        if (doc.contains("category") && doc["category"].is_string()) page.category = doc["category"];

        if (has_text) {
            if (has_html) {
                ++local.both_present;
                warn_at(warn, local.lines, "both html and text present, using text");
            }
            page.text = normalize_whitespace(doc["text"].get<std::string>());
            page.origin = TextOrigin::kText;
            ++local.from_text;
        } else {
            ExtractedText extracted = extract_text(doc["html"].get<std::string>());
            page.text = normalize_whitespace(extracted.title + " " + extracted.body);
            page.origin = TextOrigin::kHtml;
            ++local.from_html;
        }
        page.char_count = utf8_char_count(page.text);
        pages.push_back(std::move(page));
        ++local.loaded;
    }
    if (stats) *stats = local;
    return pages;
}

std::string page_to_json(const PageRecord& page) {
    json doc;
    doc["id"] = page.id;
    doc["url"] = page.url;
    doc["text"] = page.text;
    if (!page.lang.empty()) doc["lang"] = page.lang;
    if (!page.category.empty()) doc["category"] = page.category;
    doc["char_count"] = page.char_count;
    // replace, not throw, if a text somehow carries invalid utf-8
    return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

void write_pages(std::ostream& out, const std::vector<PageRecord>& pages) {
    for (const auto& page : pages) {
        out << page_to_json(page) << '\n';
    }
}

std::string distribution_to_json_text(const CategoryDistribution& dist) {
    json bytes = json::object();
    json pages = json::object();
    for (const auto& [category, b] : dist.bytes) bytes[category] = b;
    for (const auto& [category, p] : dist.pages) pages[category] = p;
    json doc = {{"bytes", bytes}, {"pages", pages}};
    return doc.dump();
}

CategoryDistribution distribution_from_json_text(const std::string& text) {
    json doc = json::parse(text);
    CategoryDistribution dist;
    for (const auto& [category, b] : doc.at("bytes").items()) {
        dist.bytes[category] = b.get<std::uint64_t>();
    }
    for (const auto& [category, p] : doc.at("pages").items()) {
        dist.pages[category] = p.get<std::uint64_t>();
    }
    return dist;
}

}  // namespace darkcorpus
