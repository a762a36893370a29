#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace darkcorpus {

// Where the text of a page came from.
enum class TextOrigin { kText, kHtml };

// One crawled page flowing through the pipeline. `text` is always populated
// after ingestion; raw HTML is consumed during extraction and not kept.
// `status` is "ok" until a stage drops the page, after which it reads
// "dropped:<stage>".
struct PageRecord {
    std::string id;
    std::string url;
    std::string text;
    std::string lang;      // empty when the input carried no label
    std::string category;  // empty until classified
    std::uint64_t char_count{0};
    TextOrigin origin{TextOrigin::kText};
    std::string status{"ok"};
};

// Byte totals per category; bytes are UTF-8 encoded lengths of page text.
struct CategoryDistribution {
    std::map<std::string, std::uint64_t> bytes;
    std::map<std::string, std::uint64_t> pages;

    void add(const std::string& category, std::uint64_t text_bytes) {
        bytes[category] += text_bytes;
        pages[category] += 1;
    }
    std::uint64_t total_bytes() const {
        std::uint64_t t = 0;
        for (const auto& [_, b] : bytes) t += b;
        return t;
    }
    std::uint64_t total_pages() const {
        std::uint64_t t = 0;
        for (const auto& [_, p] : pages) t += p;
        return t;
    }
};

}  // namespace darkcorpus
