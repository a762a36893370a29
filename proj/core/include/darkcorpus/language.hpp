#pragma once

#include <string_view>
#include <vector>

#include "darkcorpus/page.hpp"

namespace darkcorpus {

enum class LanguageGateMode { kTrustLabel, kHeuristic, kAcceptAll };

struct LanguagePolicy {
    LanguageGateMode mode{LanguageGateMode::kTrustLabel};
    std::string accept_lang{"en"};
    double heuristic_threshold{0.40};
};

struct GateDecision {
    bool keep{false};
    bool unlabeled{false};  // trust-label mode saw no label
};

// Decides whether a page passes the language gate.
//  - trust-label: keep when the page's label equals accept_lang
//    (ASCII case-insensitive); an unlabeled page is dropped and flagged.
//  - heuristic: keep when both the fraction of characters in U+0000..U+00FF
//    and the fraction of tokens found in the built-in stopword list reach
//    heuristic_threshold.
//  - accept-all: keep everything.
GateDecision language_gate(const PageRecord& page, const LanguagePolicy& policy);

// The 150 high-frequency English words used by the heuristic.
const std::vector<std::string_view>& english_stopwords();

// Fraction of characters at or below U+00FF; 0 for empty text. Bytes that
// are not valid UTF-8 count as characters outside the range.
double latin1_char_fraction(std::string_view text);

// Fraction of whitespace-separated tokens that, lowercased and with ASCII
// punctuation stripped from both ends, appear in the stopword list. 0 for
// empty text.
double stopword_fraction(std::string_view text);

LanguageGateMode language_gate_mode_from_name(std::string_view name);
std::string_view language_gate_mode_name(LanguageGateMode mode);

}  // namespace darkcorpus
