#include <doctest.h>

#include <stdexcept>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "darkcorpus/classify.hpp"
#include "darkcorpus/text_util.hpp"

using namespace darkcorpus;

TEST_SUITE_BEGIN("classify");

namespace {

PageRecord page(std::string id, std::string text, std::string category = "") {
    PageRecord p;
    p.id = std::move(id);
    p.url = "u";
    p.text = std::move(text);
    p.category = std::move(category);
    return p;
}

// Reference hit counter: plain substring scan with boundary checks, one pass
// per keyword. The production classifier tokenizes instead; the two must
// agree exactly.
std::size_t naive_hits(const std::string& folded, const std::string& keyword) {
    std::size_t hits = 0;
    auto alnum = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    };
    for (std::size_t pos = 0; (pos = folded.find(keyword, pos)) != std::string::npos; ++pos) {
        bool left = pos == 0 || !alnum(folded[pos - 1]);
        bool right = pos + keyword.size() >= folded.size() || !alnum(folded[pos + keyword.size()]);
        if (left && right) ++hits;
    }
    return hits;
}

std::string naive_winner(const std::string& text, const Lexicon& lexicon,
                         const std::string& fallback) {
    std::string folded = lower_latin1(text);
    std::string best = fallback;
    std::size_t best_hits = 0;
    for (const auto& [category, keywords] : lexicon) {  // map order = lexicographic
        std::size_t total = 0;
        for (const auto& k : keywords) total += naive_hits(folded, k);
        if (total > best_hits) {
            best_hits = total;
            best = category;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("the label set is fixed, sorted, and closed") {
    const auto& cats = activity_categories();
    REQUIRE(cats.size() == 9);
    CHECK(cats[0] == "Arms/Weapons");
    CHECK(cats[1] == "Cryptocurrency");
    CHECK(cats[2] == "Drugs");
    CHECK(cats[3] == "Electronics");
    CHECK(cats[4] == "Financial");
    CHECK(cats[5] == "Gambling");
    CHECK(cats[6] == "Hacking");
    CHECK(cats[7] == "Pornography");
    CHECK(cats[8] == "Violence");
    for (const auto& c : cats) CHECK(is_activity_category(c));
    CHECK_FALSE(is_activity_category("Weapons"));
    CHECK_FALSE(is_activity_category(""));
    CHECK_FALSE(is_activity_category("drugs"));  // exact case only
}

TEST_CASE("the default lexicon covers every category") {
    const Lexicon& lex = default_lexicon();
    CHECK(lex.size() == 9);
    for (const auto& [category, keywords] : lex) {
        CHECK(is_activity_category(category));
        CHECK(keywords.size() >= 10);
    }
}

TEST_CASE("hand-counted keyword hits pick the right category") {
    // Three weapon hits against one crypto hit.
    CHECK(keyword_classify("gun rifle ammo and one bitcoin", default_lexicon()) == "Arms/Weapons");
    // Repetition counts per occurrence.
    CHECK(keyword_classify("casino casino casino heroin", default_lexicon()) == "Gambling");
    CHECK(keyword_classify("heroin heroin casino", default_lexicon()) == "Drugs");
}

TEST_CASE("hits need token boundaries on both sides") {
    // "shotgun" must not feed the "gun" keyword.
    CHECK(keyword_classify("shotgun shotgun shotgun heroin", default_lexicon()) == "Drugs");
    // "bitcoins" is not "bitcoin", but "bitcoin," is.
    CHECK(keyword_classify("bitcoins bitcoins heroin", default_lexicon()) == "Drugs");
    CHECK(keyword_classify("bitcoin, arrived", default_lexicon()) == "Cryptocurrency");
    // Punctuation and string edges are boundaries.
    CHECK(keyword_classify("(glock)", default_lexicon()) == "Arms/Weapons");
    CHECK(keyword_classify("glock", default_lexicon()) == "Arms/Weapons");
    // A digit is not a boundary: "17grams" hides the keyword.
    CHECK(keyword_classify("17grams of nothing", default_lexicon(), "Violence") == "Violence");
    CHECK(keyword_classify("17 grams of nothing", default_lexicon()) == "Drugs");
}

TEST_CASE("matching is case-insensitive") {
    CHECK(keyword_classify("BITCOIN WALLET", default_lexicon()) == "Cryptocurrency");
    CHECK(keyword_classify("BiTcOiN", default_lexicon()) == "Cryptocurrency");
}

TEST_CASE("ties go to the lexicographically smallest category") {
    // One hit each for Cryptocurrency and Drugs.
    CHECK(keyword_classify("bitcoin heroin", default_lexicon()) == "Cryptocurrency");
    // One hit each for Arms/Weapons and Violence.
    CHECK(keyword_classify("pistol hitman", default_lexicon()) == "Arms/Weapons");
}

TEST_CASE("zero hits fall back") {
    CHECK(keyword_classify("nothing suspicious at all", default_lexicon()) == "Financial");
    CHECK(keyword_classify("nothing suspicious at all", default_lexicon(), "Gambling") ==
          "Gambling");
    CHECK(keyword_classify("", default_lexicon()) == "Financial");
}

TEST_CASE("multi-word keywords match as phrases") {
    Lexicon lex = {{"Drugs", {"pure powder"}}, {"Hacking", {"exploit"}}};
    CHECK(keyword_classify("best pure powder here", lex, "Financial") == "Drugs");
    // The phrase needs its own boundaries.
    CHECK(keyword_classify("impure powder", lex, "Financial") == "Financial");
    CHECK(keyword_classify("pure powders", lex, "Financial") == "Financial");
    // Phrase and token hits add up within a category.
    Lexicon both = {{"Drugs", {"pure powder", "heroin"}}, {"Hacking", {"exploit", "malware"}}};
    CHECK(keyword_classify("pure powder heroin exploit", both, "Financial") == "Drugs");
}

TEST_CASE("classifier agrees with the naive scan on random texts") {
    const Lexicon& lex = default_lexicon();
    std::vector<std::string> pool;
    for (const auto& [_, keywords] : lex) {
        for (const auto& k : keywords) pool.push_back(k);
    }
    // Traps: supersets and near-misses of real keywords.
    for (const char* trap : {"shotgun", "bitcoins", "xguns", "gun9", "account", "grams,",
                             "casino.", "(exploit)", "un", "oin", "the", "market", "vendor"}) {
        pool.push_back(trap);
    }
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 300; ++round) {
        std::ostringstream text;
        std::size_t words = 1 + rng() % 40;
        for (std::size_t i = 0; i < words; ++i) {
            if (i) text << (rng() % 6 == 0 ? ", " : " ");
            if (rng() % 4 == 0) text << "Filler" << rng() % 100;
            else text << pool[rng() % pool.size()];
        }
        std::string t = text.str();
        CHECK(keyword_classify(t, lex) == naive_winner(t, lex, "Financial"));
    }
}

TEST_CASE("lexicon json parses, folds, and rejects unknown categories") {
    Lexicon lex = lexicon_from_json(R"({"Drugs": ["COCAINE", "pills"], "Hacking": ["0day"]})");
    CHECK(lex.size() == 2);
    CHECK(lex.at("Drugs") == std::vector<std::string>{"cocaine", "pills"});
    CHECK(keyword_classify("Cocaine here", lex, "Financial") == "Drugs");

    CHECK_THROWS_AS(lexicon_from_json(R"({"Narcotics": ["x"]})"), std::invalid_argument);
    CHECK_THROWS_AS(lexicon_from_json(R"({"Drugs": "not an array"})"), std::invalid_argument);
    CHECK_THROWS_AS(lexicon_from_json(R"({"Drugs": [42]})"), std::invalid_argument);
    CHECK_THROWS_AS(lexicon_from_json(R"(["Drugs"])"), std::invalid_argument);
}

TEST_CASE("the label classifier keeps valid labels and replaces the rest") {
    std::vector<PageRecord> pages;
    pages.push_back(page("a", "x", "Drugs"));
    pages.push_back(page("b", "x", "NotACategory"));
    pages.push_back(page("c", "x", ""));
    auto classifier = make_label_classifier("Gambling");
    CHECK(classifier->name() == "label");
    classifier->classify(pages);
    CHECK(pages[0].category == "Drugs");
    CHECK(pages[1].category == "Gambling");
    CHECK(pages[2].category == "Gambling");
}

TEST_CASE("the keyword classifier labels every page in place") {
    std::vector<PageRecord> pages;
    pages.push_back(page("a", "glock and ammo for sale"));
    pages.push_back(page("b", "fresh cocaine delivered"));
    pages.push_back(page("c", "nothing to see"));
    auto classifier = make_keyword_classifier();
    CHECK(classifier->name() == "keyword");
    classifier->classify(pages);
    CHECK(pages[0].category == "Arms/Weapons");
    CHECK(pages[1].category == "Drugs");
    CHECK(pages[2].category == "Financial");
}

TEST_CASE("the exec classifier speaks one json object per line") {
    std::vector<PageRecord> pages;
    pages.push_back(page("a", "this one mentions cocaine"));
    pages.push_back(page("b", "this one does not"));
    pages.push_back(page("c", "unanswered"));
    // Answers Drugs when the text contains cocaine, an invalid label
    // otherwise, and never answers page c at all.
    std::string cmd =
        "python3 -c \""
        "import sys, json\n"
        "for line in sys.stdin:\n"
        "    d = json.loads(line)\n"
        "    if d['id'] == 'c': continue\n"
        "    cat = 'Drugs' if 'cocaine' in d['text'] else 'Bogus'\n"
        "    print(json.dumps({'id': d['id'], 'category': cat}))\n"
        "\"";
    auto classifier = make_exec_classifier(cmd, "Financial");
    CHECK(classifier->name() == "exec");
    classifier->classify(pages);
    CHECK(pages[0].category == "Drugs");
    CHECK(pages[1].category == "Financial");  // invalid label falls back
    CHECK(pages[2].category == "Financial");  // no answer falls back
}

TEST_CASE("an exec child echoing junk falls back everywhere") {
    // cat echoes the requests, which carry no category field.
    std::vector<PageRecord> pages;
    pages.push_back(page("a", "text"));
    auto classifier = make_exec_classifier("cat", "Violence");
    classifier->classify(pages);
    CHECK(pages[0].category == "Violence");
}

TEST_CASE("a failing exec child raises") {
    std::vector<PageRecord> pages;
    pages.push_back(page("a", "text"));
    auto failing = make_exec_classifier("exit 3", "Financial");
    CHECK_THROWS_AS(failing->classify(pages), std::runtime_error);
    auto missing = make_exec_classifier("definitely-not-a-real-command-xyz", "Financial");
    CHECK_THROWS_AS(missing->classify(pages), std::runtime_error);
}

TEST_CASE("category distribution sums bytes and counts pages") {
    std::vector<PageRecord> pages;
    pages.push_back(page("a", "12345", "Drugs"));
    pages.push_back(page("b", "123", "Drugs"));
    pages.push_back(page("c", "1234567", "Hacking"));
    CategoryDistribution d = category_distribution(pages);
    CHECK(d.bytes.at("Drugs") == 8);
    CHECK(d.pages.at("Drugs") == 2);
    CHECK(d.bytes.at("Hacking") == 7);
    CHECK(d.total_bytes() == 15);
    CHECK(d.total_pages() == 3);
}

TEST_SUITE_END();
