#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "darkcorpus/page.hpp"

namespace darkcorpus {

// The fixed activity label set, in lexicographic order.
const std::vector<std::string>& activity_categories();

bool is_activity_category(std::string_view name);

inline constexpr std::string_view kDefaultFallbackCategory = "Financial";

// Keyword lexicon: category name -> lowercase keywords (single or multi word).
using Lexicon = std::map<std::string, std::vector<std::string>>;

// Built-in lexicon covering all nine categories.
const Lexicon& default_lexicon();

// Parses {"Category": ["keyword", ...], ...}. Unknown categories are rejected.
Lexicon lexicon_from_json(const std::string& json_text);

// Counts token-boundary, case-insensitive hits of every lexicon keyword in
// text and returns the category with the most hits. Ties pick the
// lexicographically smallest category name; zero hits return fallback.
std::string keyword_classify(std::string_view text, const Lexicon& lexicon,
                             std::string_view fallback = kDefaultFallbackCategory);

// Assigns a category to every page in place.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void classify(std::vector<PageRecord>& pages) = 0;
    virtual std::string name() const = 0;
};

// Keeps an existing page category when it is one of the nine labels,
// otherwise assigns fallback.
std::unique_ptr<Classifier> make_label_classifier(
    std::string fallback = std::string(kDefaultFallbackCategory));

std::unique_ptr<Classifier> make_keyword_classifier(
    Lexicon lexicon = default_lexicon(),
    std::string fallback = std::string(kDefaultFallbackCategory));

// Runs `command` through /bin/sh. The child reads one JSON object
// {"id": ..., "text": ...} per line on stdin and must answer one
// {"id": ..., "category": ...} per line on stdout. Pages whose id gets no
// answer, or an answer outside the label set, receive fallback. A child
// that cannot be spawned or exits nonzero raises std::runtime_error.
std::unique_ptr<Classifier> make_exec_classifier(
    std::string command, std::string fallback = std::string(kDefaultFallbackCategory));

// Distribution over categories of the given pages (bytes of text + counts).
CategoryDistribution category_distribution(const std::vector<PageRecord>& pages);

}  // namespace darkcorpus
