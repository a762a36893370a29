#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "darkcorpus/minhash.hpp"

namespace {

std::string word_soup(std::size_t words, std::uint64_t seed) {
    static const char* kWords[] = {"alpha", "bravo",  "charlie", "delta", "echo",    "foxtrot",
                                   "golf",  "hotel",  "india",   "juliet", "kilo",   "lima",
                                   "mike",  "november", "oscar", "papa",  "quebec", "romeo"};
    std::mt19937_64 rng(seed);
    std::string text;
    text.reserve(words * 8);
    for (std::size_t i = 0; i < words; ++i) {
        text += kWords[rng() % (sizeof kWords / sizeof *kWords)];
        text.push_back(' ');
    }
    return text;
}

void BM_shingles(benchmark::State& state) {
    std::string text = word_soup(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        auto set = darkcorpus::shingles(text);
        benchmark::DoNotOptimize(set);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_shingles)->Range(64, 1 << 16);

void BM_signature_of_text(benchmark::State& state) {
    darkcorpus::MinHashFamily family;
    std::string text = word_soup(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        auto signature = family.signature_of_text(text);
        benchmark::DoNotOptimize(signature);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_signature_of_text)->Range(64, 1 << 16);

void BM_dedup(benchmark::State& state) {
    std::vector<darkcorpus::PageRecord> pages(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < pages.size(); ++i) {
        pages[i].id = "p" + std::to_string(i);
        pages[i].text = word_soup(200, i % 64);  // forces some duplicates
    }
    for (auto _ : state) {
        state.PauseTiming();
        auto copy = pages;
        state.ResumeTiming();
        auto outcome = darkcorpus::dedup(std::move(copy));
        benchmark::DoNotOptimize(outcome);
    }
}
BENCHMARK(BM_dedup)->Range(64, 4096);

}  // namespace
