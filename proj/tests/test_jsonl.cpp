#include <doctest.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "darkcorpus/jsonl.hpp"

using namespace darkcorpus;

TEST_SUITE_BEGIN("jsonl");

namespace {

struct Loaded {
    std::vector<PageRecord> pages;
    LoadStats stats;
    std::vector<std::pair<std::uint64_t, std::string>> warnings;
};

Loaded load(const std::string& input) {
    Loaded result;
    std::istringstream in(input);
    result.pages = load_pages(in, &result.stats, [&](std::uint64_t line, const std::string& msg) {
        result.warnings.emplace_back(line, msg);
    });
    return result;
}

}  // namespace

TEST_CASE("plain text pages load with normalized text and char counts") {
    Loaded r = load(R"({"id":"a","url":"http://x.onion/","lang":"en","text":"  hello\t\tworld  "})"
                    "\n");
    REQUIRE(r.pages.size() == 1);
    CHECK(r.pages[0].id == "a");
    CHECK(r.pages[0].url == "http://x.onion/");
    CHECK(r.pages[0].lang == "en");
    CHECK(r.pages[0].text == "hello world");
    CHECK(r.pages[0].char_count == 11);
    CHECK(r.pages[0].origin == TextOrigin::kText);
    CHECK(r.pages[0].status == "ok");
    CHECK(r.stats.loaded == 1);
    CHECK(r.stats.from_text == 1);
    CHECK(r.stats.from_html == 0);
}

TEST_CASE("char counts are characters, not bytes") {
    Loaded r = load(R"({"url":"u","text":"café"})"
                    "\n");
    REQUIRE(r.pages.size() == 1);
    CHECK(r.pages[0].text.size() == 5);  // é is two bytes
    CHECK(r.pages[0].char_count == 4);
}

TEST_CASE("html pages extract title plus body") {
    Loaded r = load(
        R"({"url":"u","html":"<html><head><title>Shop</title></head><body>Buy <b>now</b></body></html>"})"
        "\n");
    REQUIRE(r.pages.size() == 1);
    CHECK(r.pages[0].text == "Shop Buy now");
    CHECK(r.pages[0].origin == TextOrigin::kHtml);
    CHECK(r.stats.from_html == 1);
}

TEST_CASE("text wins over html with a warning") {
    Loaded r = load(R"({"url":"u","text":"the text","html":"<body>the html</body>"})"
                    "\n");
    REQUIRE(r.pages.size() == 1);
    CHECK(r.pages[0].text == "the text");
    CHECK(r.pages[0].origin == TextOrigin::kText);
    CHECK(r.stats.both_present == 1);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].first == 1);
    CHECK(r.warnings[0].second.find("using text") != std::string::npos);
}

TEST_CASE("url is required") {
    Loaded r = load(R"({"text":"no url here"})"
                    "\n"
                    R"({"url":42,"text":"wrong type"})"
                    "\n");
    CHECK(r.pages.empty());
    CHECK(r.stats.skipped == 2);
    REQUIRE(r.warnings.size() == 2);
    CHECK(r.warnings[0].second.find("url") != std::string::npos);
}

TEST_CASE("a page needs html or text") {
    Loaded r = load(R"({"url":"u","lang":"en"})"
                    "\n");
    CHECK(r.pages.empty());
    CHECK(r.stats.skipped == 1);
}

TEST_CASE("malformed lines are skipped, never fatal") {
    Loaded r = load("this is not json\n"
                    "[1,2,3]\n"
                    R"({"url":"u","text":"good"})"
                    "\n");
    REQUIRE(r.pages.size() == 1);
    CHECK(r.pages[0].text == "good");
    CHECK(r.stats.lines == 3);
    CHECK(r.stats.skipped == 2);
    CHECK(r.stats.loaded == 1);
}

TEST_CASE("blank lines are counted but not errors") {
    Loaded r = load("\n"
                    R"({"url":"u","text":"x"})"
                    "\n"
                    "\n");
    CHECK(r.stats.lines == 3);
    CHECK(r.stats.skipped == 0);
    CHECK(r.stats.loaded == 1);
}

TEST_CASE("missing ids derive from the line number") {
    Loaded r = load("\n"
                    R"({"url":"u","text":"x"})"
                    "\n"
                    R"({"url":"v","text":"y"})"
                    "\n");
    REQUIRE(r.pages.size() == 2);
    CHECK(r.pages[0].id == "p000002");
    CHECK(r.pages[1].id == "p000003");
}

TEST_CASE("input byte accounting includes newlines") {
    std::string line = R"({"url":"u","text":"x"})";
    Loaded r = load(line + "\n" + line + "\n");
    CHECK(r.stats.input_bytes == 2 * (line.size() + 1));
}

TEST_CASE("write and reload round-trips every field") {
    PageRecord p;
    p.id = "page-1";
    p.url = "http://market.onion/item";
    p.text = "bitcoin accepted here";
    p.lang = "en";
    p.category = "Cryptocurrency";
    p.char_count = 21;

    PageRecord q;
    q.id = "page-2";
    q.url = "http://other.onion/";
    q.text = "plain";
    q.char_count = 5;

    std::ostringstream out;
    write_pages(out, {p, q});

    Loaded r = load(out.str());
    REQUIRE(r.pages.size() == 2);
    CHECK(r.pages[0].id == p.id);
    CHECK(r.pages[0].url == p.url);
    CHECK(r.pages[0].text == p.text);
    CHECK(r.pages[0].lang == p.lang);
    CHECK(r.pages[0].category == p.category);
    CHECK(r.pages[0].char_count == p.char_count);
    CHECK(r.pages[1].id == q.id);
    CHECK(r.pages[1].lang.empty());
    CHECK(r.pages[1].category.empty());
}

TEST_CASE("page json omits empty lang and category") {
    PageRecord p;
    p.id = "x";
    p.url = "u";
    p.text = "t";
    p.char_count = 1;
    std::string j = page_to_json(p);
    CHECK(j.find("lang") == std::string::npos);
    CHECK(j.find("category") == std::string::npos);
    CHECK(j.find("char_count") != std::string::npos);
}

TEST_CASE("distribution serialization round-trips") {
    CategoryDistribution d;
    d.add("Drugs", 100);
    d.add("Drugs", 50);
    d.add("Hacking", 7);
    std::string text = distribution_to_json_text(d);
    CategoryDistribution back = distribution_from_json_text(text);
    CHECK(back.bytes == d.bytes);
    CHECK(back.pages == d.pages);
    CHECK(back.bytes.at("Drugs") == 150);
    CHECK(back.pages.at("Drugs") == 2);

    CategoryDistribution empty;
    CHECK(distribution_from_json_text(distribution_to_json_text(empty)).bytes.empty());
}

TEST_SUITE_END();
