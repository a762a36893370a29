#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "darkcorpus/mask.hpp"

namespace {

// Page-like text: mostly words, some identifiers sprinkled in.
std::string synth_text(std::size_t target_bytes, std::uint64_t seed) {
    static const char* kWords[] = {"market", "vendor", "listing", "review",  "escrow", "shipping",
                                   "order",  "price",  "account", "product", "forum",  "thread"};
    static const char* kIdentifiers[] = {
        "contact admin@example.onionmail.org now",
        "mirror http://expyuzz4wqqyqhjn.onion/faq",
        "pay to 1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN2",
        "node 192.168.14.7 is up",
        "see https://market-status.example.com/uptime",
    };
    std::mt19937_64 rng(seed);
    std::string text;
    text.reserve(target_bytes + 64);
    while (text.size() < target_bytes) {
        if (rng() % 23 == 0) {
            text += kIdentifiers[rng() % (sizeof kIdentifiers / sizeof *kIdentifiers)];
        } else {
            text += kWords[rng() % (sizeof kWords / sizeof *kWords)];
        }
        text.push_back(' ');
    }
    return text;
}

void BM_apply_masks(benchmark::State& state) {
    std::string text = synth_text(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        std::string out = darkcorpus::apply_masks(text);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_apply_masks)->Range(1 << 12, 1 << 22);

void BM_mask_emails(benchmark::State& state) {
    std::string text = synth_text(static_cast<std::size_t>(state.range(0)), 11);
    for (auto _ : state) {
        std::string out = darkcorpus::mask_emails(text);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_mask_emails)->Range(1 << 12, 1 << 22);

void BM_normalize_whitespace(benchmark::State& state) {
    std::string text = synth_text(static_cast<std::size_t>(state.range(0)), 13);
    for (auto _ : state) {
        std::string out = darkcorpus::normalize_whitespace(text);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_normalize_whitespace)->Range(1 << 12, 1 << 22);

}  // namespace

BENCHMARK_MAIN();
