#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "darkcorpus/page.hpp"

namespace darkcorpus {

struct LoadStats {
    std::uint64_t lines{0};
    std::uint64_t input_bytes{0};    // bytes of input consumed, newlines included
    std::uint64_t loaded{0};
    std::uint64_t skipped{0};        // malformed json, missing url, no content
    std::uint64_t from_html{0};
    std::uint64_t from_text{0};
    std::uint64_t both_present{0};   // text won over html
};

using WarnFn = std::function<void(std::uint64_t line, const std::string& message)>;

// Reads pages from line-delimited JSON. Each line is an object with a
// required "url" and at least one of "html" or "text"; "id", "lang" and
// "category" are optional. When both html and text are present the text
// field wins and a warning is issued. HTML is reduced to title plus body
// text. All text is whitespace-normalized before char_count is taken, and
// pages without an id get one derived from their line number. Bad lines are
// skipped with a warning, never fatal.
std::vector<PageRecord> load_pages(std::istream& in, LoadStats* stats = nullptr,
                                   const WarnFn& warn = {});

// Writes pages in the same interchange format, one object per line. Empty
// lang/category fields are omitted.
void write_pages(std::ostream& out, const std::vector<PageRecord>& pages);

// Serializes one page; exposed so callers can append extra fields.
std::string page_to_json(const PageRecord& page);

// Category distribution interchange: {"bytes": {...}, "pages": {...}}.
std::string distribution_to_json_text(const CategoryDistribution& dist);
CategoryDistribution distribution_from_json_text(const std::string& text);

}  // namespace darkcorpus
