#include "darkcorpus/minhash.hpp"

#include <random>
#include <stdexcept>

#include "darkcorpus/text_util.hpp"
#include "darkcorpus/mask.hpp"

namespace darkcorpus {

namespace {

// Word start/end offsets of a whitespace-normalized string (single spaces).
std::vector<std::pair<std::size_t, std::size_t>> word_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] == ' ') {
            ++pos;
            continue;
        }
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != ' ') ++pos;
        spans.emplace_back(start, pos);
    }
    return spans;
}

std::string fold_for_shingles(std::string_view text) {
    return lower_latin1(normalize_whitespace(text));
}

}  // namespace

ShingleSet shingles(std::string_view text, std::size_t n) {
    if (n == 0) throw std::invalid_argument("shingle size must be at least 1");
    ShingleSet set;
    std::string folded = fold_for_shingles(text);
    if (folded.empty()) return set;
    auto spans = word_spans(folded);
    if (spans.size() < n) {
        set.insert(folded);
        return set;
    }
    for (std::size_t i = 0; i + n <= spans.size(); ++i) {
        // words are single-space separated, so an n-gram is one substring
        set.insert(folded.substr(spans[i].first, spans[i + n - 1].second - spans[i].first));
    }
    return set;
}

MinHashFamily::MinHashFamily(std::size_t num_permutations, std::uint64_t seed) : seed_(seed) {
    if (num_permutations == 0) throw std::invalid_argument("need at least one permutation");
    std::mt19937_64 rng(seed);
    mults_.reserve(num_permutations);
    adds_.reserve(num_permutations);
    for (std::size_t i = 0; i < num_permutations; ++i) {
        mults_.push_back(rng() | 1);  // odd multipliers permute 2^64
        adds_.push_back(rng());
    }
}

void MinHashFamily::mix_into(std::uint64_t base, std::vector<std::uint64_t>& mins) const {
    for (std::size_t i = 0; i < mults_.size(); ++i) {
        std::uint64_t v = mults_[i] * base + adds_[i];
        if (v < mins[i]) mins[i] = v;
    }
}

std::vector<std::uint64_t> MinHashFamily::signature(const ShingleSet& set) const {
    std::vector<std::uint64_t> mins(size(), ~0ULL);
    for (const auto& shingle : set) mix_into(hash64(shingle), mins);
    return mins;
}

std::vector<std::uint64_t> MinHashFamily::signature_of_text(std::string_view text,
                                                            std::size_t n) const {
    if (n == 0) throw std::invalid_argument("shingle size must be at least 1");
    std::vector<std::uint64_t> mins(size(), ~0ULL);
    std::string folded = fold_for_shingles(text);
    if (folded.empty()) return mins;
    auto spans = word_spans(folded);
    std::string_view view = folded;
    if (spans.size() < n) {
        mix_into(hash64(view), mins);
        return mins;
    }
    for (std::size_t i = 0; i + n <= spans.size(); ++i) {
        mix_into(hash64(view.substr(spans[i].first, spans[i + n - 1].second - spans[i].first)),
                 mins);
    }
    return mins;
}

double estimate_jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("signatures must have equal nonzero length");
    }
    std::size_t agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(a.size());
}

double exact_jaccard(const ShingleSet& a, const ShingleSet& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t intersection = 0;
    const ShingleSet& small = a.size() <= b.size() ? a : b;
    const ShingleSet& large = a.size() <= b.size() ? b : a;
    for (const auto& s : small) {
        if (large.count(s)) ++intersection;
    }
    return static_cast<double>(intersection) /
           static_cast<double>(a.size() + b.size() - intersection);
}

namespace {

struct SignatureHash {
    std::size_t operator()(const std::vector<std::uint64_t>& sig) const {
        return static_cast<std::size_t>(hash64(std::string_view(
            reinterpret_cast<const char*>(sig.data()), sig.size() * sizeof(std::uint64_t))));
    }
};

}  // namespace

DedupOutcome dedup(std::vector<PageRecord> pages, const DedupOptions& options,
                   const std::vector<std::vector<std::uint64_t>>* signatures,
                   std::vector<PageRecord>* dropped) {
    if (signatures && signatures->size() != pages.size()) {
        throw std::invalid_argument("signature list does not match page list");
    }
    MinHashFamily family(options.num_permutations, options.seed);

    DedupOutcome out;
    out.kept.reserve(pages.size());
    std::unordered_set<std::vector<std::uint64_t>, SignatureHash> seen;
    std::vector<std::vector<std::uint64_t>> kept_sigs;  // for the near mode

    for (std::size_t i = 0; i < pages.size(); ++i) {
        std::vector<std::uint64_t> sig = signatures
                                             ? (*signatures)[i]
                                             : family.signature_of_text(pages[i].text,
                                                                        options.shingle_size);
        bool drop_exact = seen.count(sig) > 0;
        bool drop_near = false;
        if (!drop_exact && options.near_dup_threshold > 0.0) {
            for (const auto& kept_sig : kept_sigs) {
                if (estimate_jaccard(kept_sig, sig) >= options.near_dup_threshold) {
                    drop_near = true;
                    break;
                }
            }
        }
        if (drop_exact || drop_near) {
            drop_exact ? ++out.dropped_exact : ++out.dropped_near;
            if (dropped) {
                pages[i].status = "dropped:dedup";
                dropped->push_back(std::move(pages[i]));
            }
            continue;
        }
        if (options.near_dup_threshold > 0.0) kept_sigs.push_back(sig);
        seen.insert(std::move(sig));
        out.kept.push_back(std::move(pages[i]));
    }
    return out;
}

}  // namespace darkcorpus
