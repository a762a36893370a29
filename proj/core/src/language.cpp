#include "darkcorpus/language.hpp"

#include <stdexcept>
#include <unordered_set>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

const std::vector<std::string_view>& english_stopwords() {
    static const std::vector<std::string_view> words = {
        "the",     "be",      "to",      "of",     "and",     "a",       "in",
        "that",    "have",    "i",       "it",     "for",     "not",     "on",
        "with",    "he",      "as",      "you",    "do",      "at",      "this",
        "but",     "his",     "by",      "from",   "they",    "we",      "say",
        "her",     "she",     "or",      "an",     "will",    "my",      "one",
        "all",     "would",   "there",   "their",  "what",    "so",      "up",
        "out",     "if",      "about",   "who",    "get",     "which",   "go",
        "me",      "when",    "make",    "can",    "like",    "time",    "no",
        "just",    "him",     "know",    "take",   "people",  "into",    "year",
        "your",    "good",    "some",    "could",  "them",    "see",     "other",
        "than",    "then",    "now",     "look",   "only",    "come",    "its",
        "over",    "think",   "also",    "back",   "after",   "use",     "two",
        "how",     "our",     "work",    "first",  "well",    "way",     "even",
        "new",     "want",    "because", "any",    "these",   "give",    "day",
        "most",    "us",      "is",      "was",    "are",     "were",    "been",
        "has",     "had",     "did",     "does",   "said",    "each",    "such",
        "same",    "here",    "why",     "ask",    "need",    "too",     "feel",
        "very",    "own",     "much",    "mean",   "before",  "right",   "through",
        "old",     "still",   "should",  "where",  "those",   "both",    "down",
        "more",    "while",   "between", "under",  "never",   "off",     "again",
        "against", "many",    "few",     "during", "without", "being",   "every",
        "might",   "must",    "another",
    };
    return words;
}

namespace {

const std::unordered_set<std::string_view>& stopword_set() {
    static const std::unordered_set<std::string_view> set(english_stopwords().begin(),
                                                          english_stopwords().end());
    return set;
}

bool is_ascii_punct(char c) {
    return static_cast<unsigned char>(c) < 0x80 && !is_ascii_alnum(c);
}

}  // namespace

double latin1_char_fraction(std::string_view text) {
    std::uint64_t total = 0, in_range = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        Utf8Char c = utf8_decode(text, pos);
        ++total;
        if (c.valid && c.scalar <= 0xFF) ++in_range;
        pos += c.length;
    }
    return total == 0 ? 0.0 : static_cast<double>(in_range) / static_cast<double>(total);
}

double stopword_fraction(std::string_view text) {
    std::uint64_t tokens = 0, hits = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        Utf8Char c = utf8_decode(text, pos);
        if (c.valid && is_unicode_space(c.scalar)) {
            pos += c.length;
            continue;
        }
        std::size_t start = pos;
        while (pos < text.size()) {
            Utf8Char t = utf8_decode(text, pos);
            if (t.valid && is_unicode_space(t.scalar)) break;
            pos += t.length;
        }
        ++tokens;
        std::string_view token = text.substr(start, pos - start);
        std::size_t b = 0, e = token.size();
        while (b < e && is_ascii_punct(token[b])) ++b;
        while (e > b && is_ascii_punct(token[e - 1])) --e;
        if (e > b && stopword_set().count(lower_latin1(token.substr(b, e - b)))) ++hits;
    }
    return tokens == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(tokens);
}

GateDecision language_gate(const PageRecord& page, const LanguagePolicy& policy) {
    switch (policy.mode) {
        case LanguageGateMode::kAcceptAll:
            return {true, false};
        case LanguageGateMode::kTrustLabel: {
            if (page.lang.empty()) return {false, true};
            bool match = page.lang.size() == policy.accept_lang.size();
            for (std::size_t i = 0; match && i < page.lang.size(); ++i) {
                match = ascii_lower(page.lang[i]) == ascii_lower(policy.accept_lang[i]);
            }
            return {match, false};
        }
        case LanguageGateMode::kHeuristic: {
            bool keep = latin1_char_fraction(page.text) >= policy.heuristic_threshold &&
                        stopword_fraction(page.text) >= policy.heuristic_threshold;
            return {keep, false};
        }
    }
    return {false, false};
}

LanguageGateMode language_gate_mode_from_name(std::string_view name) {
    if (name == "trust_label" || name == "label") return LanguageGateMode::kTrustLabel;
    if (name == "heuristic") return LanguageGateMode::kHeuristic;
    if (name == "accept_all" || name == "all") return LanguageGateMode::kAcceptAll;
    throw std::invalid_argument("unknown language gate mode: " + std::string(name));
}

std::string_view language_gate_mode_name(LanguageGateMode mode) {
    switch (mode) {
        case LanguageGateMode::kTrustLabel: return "trust_label";
        case LanguageGateMode::kHeuristic: return "heuristic";
        case LanguageGateMode::kAcceptAll: return "accept_all";
    }
    return "trust_label";
}

}  // namespace darkcorpus
