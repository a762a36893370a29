#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "darkcorpus/stats.hpp"

using namespace darkcorpus;

TEST_SUITE_BEGIN("stats");

namespace {

// Reference quartiles: sort everything, take the ceil(p*n)-th smallest.
CharCountQuartiles quartiles_by_sorting(std::vector<std::uint64_t> counts) {
    CharCountQuartiles q;
    q.n = counts.size();
    if (counts.empty()) return q;
    std::sort(counts.begin(), counts.end());
    auto at = [&](double p) {
        auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(counts.size())));
        return counts[(r == 0 ? 1 : r) - 1];
    };
    q.q1 = at(0.25);
    q.q2 = at(0.50);
    q.q3 = at(0.75);
    q.min = counts.front();
    q.max = counts.back();
    long double sum = 0;
    for (auto c : counts) sum += c;
    q.mean = static_cast<double>(sum / static_cast<long double>(counts.size()));
    return q;
}

CharCountQuartiles accumulate(const std::vector<std::uint64_t>& counts) {
    CharCountAccumulator acc;
    for (auto c : counts) acc.add(c);
    return acc.finalize();
}

}  // namespace

TEST_CASE("quartiles use the nearest-rank rule") {
    // For {1,2,3,4}: ranks are ceil(.25*4)=1, ceil(.5*4)=2, ceil(.75*4)=3.
    CharCountQuartiles q = accumulate({4, 2, 1, 3});
    CHECK(q.n == 4);
    CHECK(q.q1 == 1);
    CHECK(q.q2 == 2);
    CHECK(q.q3 == 3);
    CHECK(q.min == 1);
    CHECK(q.max == 4);
    CHECK(q.mean == doctest::Approx(2.5));

    // Single element is every quartile.
    q = accumulate({7});
    CHECK(q.q1 == 7);
    CHECK(q.q2 == 7);
    CHECK(q.q3 == 7);

    // Odd count: {10,20,30,40,50} has median 30, q1 20, q3 40.
    q = accumulate({50, 10, 40, 20, 30});
    CHECK(q.q1 == 20);
    CHECK(q.q2 == 30);
    CHECK(q.q3 == 40);
}

TEST_CASE("quartiles match the full-sort reference on random inputs") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 200; ++round) {
        std::uniform_int_distribution<std::size_t> size_dist(1, 200);
        std::uniform_int_distribution<std::uint64_t> value_dist(0, round % 3 == 0 ? 5 : 100000);
        std::vector<std::uint64_t> counts(size_dist(rng));
        for (auto& c : counts) c = value_dist(rng);

        CharCountQuartiles got = accumulate(counts);
        CharCountQuartiles want = quartiles_by_sorting(counts);
        CHECK(got.n == want.n);
        CHECK(got.min == want.min);
        CHECK(got.max == want.max);
        CHECK(got.q1 == want.q1);
        CHECK(got.q2 == want.q2);
        CHECK(got.q3 == want.q3);
        CHECK(got.mean == doctest::Approx(want.mean));
    }
}

TEST_CASE("empty accumulator finalizes to zeros") {
    CharCountAccumulator acc;
    CharCountQuartiles q = acc.finalize();
    CHECK(q.n == 0);
    CHECK(q.min == 0);
    CHECK(q.max == 0);
    CHECK(q.mean == 0.0);
}

TEST_CASE("accumulator merge equals adding everything to one") {
    std::mt19937_64 rng(7);
    std::vector<std::uint64_t> all;
    CharCountAccumulator merged;
    for (int shard = 0; shard < 5; ++shard) {
        CharCountAccumulator part;
        std::uniform_int_distribution<std::uint64_t> value_dist(1, 999);
        for (int i = 0; i < 37; ++i) {
            std::uint64_t v = value_dist(rng);
            part.add(v);
            all.push_back(v);
        }
        merged.merge(part);
    }
    CharCountQuartiles got = merged.finalize();
    CharCountQuartiles want = quartiles_by_sorting(all);
    CHECK(got.q1 == want.q1);
    CHECK(got.q2 == want.q2);
    CHECK(got.q3 == want.q3);
    CHECK(got.mean == doctest::Approx(want.mean));
}

TEST_CASE("word length histogram counts distinct words once") {
    WordLengthHistogram h;
    h.add_text("the cat saw the cat nap");
    // Distinct: the(3) cat(3) saw(3) nap(3) -> four words of length 3.
    CHECK(h.counts().at(3) == 4);
    CHECK(h.unique_words() == 4);

    h.add_text("a bb a bb ccc");
    CHECK(h.counts().at(1) == 1);
    CHECK(h.counts().at(2) == 1);
    CHECK(h.counts().at(3) == 5);  // four from before plus ccc
    CHECK(h.unique_words() == 7);
}

TEST_CASE("word length histogram measures characters, not bytes") {
    WordLengthHistogram h;
    h.add_text("caf\xC3\xA9");  // café: 4 characters, 5 bytes
    CHECK(h.counts().at(4) == 1);
    CHECK(h.counts().count(5) == 0);
}

TEST_CASE("word length histogram against a brute-force set oracle") {
    std::mt19937_64 rng(99);
    std::vector<std::string> vocab;
    for (int i = 0; i < 60; ++i) {
        std::uniform_int_distribution<int> len_dist(1, 12);
        std::string w(static_cast<std::size_t>(len_dist(rng)), 'x');
        for (auto& ch : w) ch = static_cast<char>('a' + rng() % 26);
        vocab.push_back(w);
    }
    std::ostringstream text;
    std::set<std::string> expected_words;
    for (int i = 0; i < 500; ++i) {
        const std::string& w = vocab[rng() % vocab.size()];
        expected_words.insert(w);
        text << w << (i % 7 == 0 ? "\n" : " ");
    }
    std::map<std::uint64_t, std::uint64_t> expected;
    for (const auto& w : expected_words) ++expected[w.size()];

    WordLengthHistogram h;
    h.add_text(text.str());
    CHECK(h.counts() == expected);
    CHECK(h.unique_words() == expected_words.size());
}

TEST_CASE("histogram merge unions the distinct-word sets") {
    WordLengthHistogram a;
    WordLengthHistogram b;
    a.add_text("one two three");
    b.add_text("two three four");
    a.merge(b);
    // Distinct overall: one(3) two(3) four(4) three(5).
    CHECK(a.counts().at(3) == 2);
    CHECK(a.counts().at(4) == 1);
    CHECK(a.counts().at(5) == 1);
    CHECK(a.unique_words() == 4);
}

TEST_CASE("reduction report computes per-category and overall rates") {
    CategoryDistribution initial;
    CategoryDistribution after_dedup;
    CategoryDistribution final_dist;
    initial.bytes = {{"Drugs", 1000}, {"Hacking", 500}};
    after_dedup.bytes = {{"Drugs", 800}, {"Hacking", 500}};
    final_dist.bytes = {{"Drugs", 400}, {"Hacking", 500}};

    ReductionReport r = reduction_report(initial, after_dedup, final_dist);
    CHECK(r.categories.at("Drugs").dedup_rate == doctest::Approx(0.2));
    CHECK(r.categories.at("Drugs").total_reduction_rate == doctest::Approx(0.6));
    CHECK(r.categories.at("Hacking").dedup_rate == doctest::Approx(0.0));
    CHECK(r.overall.bytes_initial == 1500);
    CHECK(r.overall.bytes_after_dedup == 1300);
    CHECK(r.overall.dedup_rate == doctest::Approx(1.0 - 1300.0 / 1500.0));
    CHECK(r.overall.total_reduction_rate == doctest::Approx(1.0 - 900.0 / 1500.0));
}

TEST_CASE("a category removed entirely reaches a 100 percent rate") {
    CategoryDistribution initial;
    CategoryDistribution after_dedup;
    CategoryDistribution final_dist;
    initial.bytes = {{"Gambling", 250}};
    // Nothing survives dedup; the category is absent downstream.
    ReductionReport r = reduction_report(initial, after_dedup, final_dist);
    CHECK(r.categories.at("Gambling").dedup_rate == doctest::Approx(1.0));
    CHECK(r.categories.at("Gambling").total_reduction_rate == doctest::Approx(1.0));
    CHECK(format_rate_percent(r.categories.at("Gambling").dedup_rate) == "100.00");
}

TEST_CASE("rate formatting is two decimals of a percentage") {
    CHECK(format_rate_percent(0.0537) == "5.37");
    CHECK(format_rate_percent(0.0) == "0.00");
    CHECK(format_rate_percent(1.0) == "100.00");
    CHECK(format_rate_percent(0.33333) == "33.33");
    CHECK(format_rate_percent(0.005) == "0.50");
}

TEST_SUITE_END();
