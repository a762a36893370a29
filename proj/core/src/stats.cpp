#include "darkcorpus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

void CharCountAccumulator::merge(const CharCountAccumulator& other) {
    counts_.insert(counts_.end(), other.counts_.begin(), other.counts_.end());
}

CharCountQuartiles CharCountAccumulator::finalize() const {
    CharCountQuartiles q;
    q.n = counts_.size();
    if (counts_.empty()) return q;

    // nearest-rank index for percentile p, as an offset
    auto rank = [n = counts_.size()](double p) {
        auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        return (r == 0 ? 1 : r) - 1;
    };
    std::size_t i1 = rank(0.25), i2 = rank(0.50), i3 = rank(0.75);
    std::nth_element(counts_.begin(), counts_.begin() + i1, counts_.end());
    q.q1 = counts_[i1];
    std::nth_element(counts_.begin() + i1, counts_.begin() + i2, counts_.end());
    q.q2 = counts_[i2];
    std::nth_element(counts_.begin() + i2, counts_.begin() + i3, counts_.end());
    q.q3 = counts_[i3];

    q.min = *std::min_element(counts_.begin(), counts_.end());
    q.max = *std::max_element(counts_.begin(), counts_.end());
    long double sum = 0;
    for (auto c : counts_) sum += c;
    q.mean = static_cast<double>(sum / static_cast<long double>(counts_.size()));
    return q;
}

void WordLengthHistogram::add_text(std::string_view text) {
    finalized_.clear();
    std::size_t pos = 0;
    while (pos < text.size()) {
        Utf8Char c = utf8_decode(text, pos);
        if (c.valid && is_unicode_space(c.scalar)) {
            pos += c.length;
            continue;
        }
        std::size_t start = pos;
        std::uint64_t chars = 0;
        while (pos < text.size()) {
            Utf8Char w = utf8_decode(text, pos);
            if (w.valid && is_unicode_space(w.scalar)) break;
            pos += w.length;
            ++chars;
        }
        seen_[chars].insert(hash64(text.substr(start, pos - start)));
    }
}

void WordLengthHistogram::merge(const WordLengthHistogram& other) {
    finalized_.clear();
    for (const auto& [len, hashes] : other.seen_) {
        seen_[len].insert(hashes.begin(), hashes.end());
    }
}

const std::map<std::uint64_t, std::uint64_t>& WordLengthHistogram::counts() const {
    if (finalized_.empty() && !seen_.empty()) {
        for (const auto& [len, hashes] : seen_) finalized_[len] = hashes.size();
    }
    return finalized_;
}

std::uint64_t WordLengthHistogram::unique_words() const {
    std::uint64_t total = 0;
    for (const auto& [_, n] : counts()) total += n;
    return total;
}

namespace {

CategoryReduction make_reduction(std::uint64_t initial, std::uint64_t after_dedup,
                                 std::uint64_t final_bytes) {
    CategoryReduction r;
    r.bytes_initial = initial;
    r.bytes_after_dedup = after_dedup;
    r.bytes_final = final_bytes;
    if (initial > 0) {
        r.dedup_rate = 1.0 - static_cast<double>(after_dedup) / static_cast<double>(initial);
        r.total_reduction_rate = 1.0 - static_cast<double>(final_bytes) / static_cast<double>(initial);
    }
    return r;
}

}  // namespace

ReductionReport reduction_report(const CategoryDistribution& initial,
                                 const CategoryDistribution& after_dedup,
                                 const CategoryDistribution& final_dist) {
    ReductionReport report;
    auto bytes_of = [](const CategoryDistribution& d, const std::string& cat) -> std::uint64_t {
        auto it = d.bytes.find(cat);
        return it == d.bytes.end() ? 0 : it->second;
    };
    for (const auto& [cat, bytes] : initial.bytes) {
        report.categories[cat] =
            make_reduction(bytes, bytes_of(after_dedup, cat), bytes_of(final_dist, cat));
    }
    report.overall = make_reduction(initial.total_bytes(), after_dedup.total_bytes(),
                                    final_dist.total_bytes());
    return report;
}

std::string format_rate_percent(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", rate * 100.0);
    return buf;
}

}  // namespace darkcorpus
