#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "darkcorpus/page.hpp"

namespace darkcorpus {

// Near-duplicate detection via minhash over word shingles.

inline constexpr std::size_t kDefaultShingleSize = 3;
inline constexpr std::size_t kDefaultNumPermutations = 128;
inline constexpr std::uint64_t kDefaultMinhashSeed = 1;

using ShingleSet = std::unordered_set<std::string>;

// Word n-grams of the text, case-folded and whitespace-normalized first.
// Words are maximal whitespace-free runs; each shingle is the n words
// joined with single spaces. Texts with fewer than n words produce the
// whole (folded, normalized) text as their one shingle; an empty text
// produces an empty set.
ShingleSet shingles(std::string_view text, std::size_t n = kDefaultShingleSize);

// A family of num_permutations hash functions: one base 64-bit hash per
// shingle, mixed per slot with multiplier/addend pairs drawn from the seed.
// Equal (seed, num_permutations) give an identical family forever.
class MinHashFamily {
  public:
    explicit MinHashFamily(std::size_t num_permutations = kDefaultNumPermutations,
                           std::uint64_t seed = kDefaultMinhashSeed);

    std::size_t size() const { return mults_.size(); }
    std::uint64_t seed() const { return seed_; }

    std::vector<std::uint64_t> signature(const ShingleSet& set) const;

    // Same result as signature(shingles(text, n)) without building the set;
    // duplicate shingles cannot change any minimum.
    std::vector<std::uint64_t> signature_of_text(std::string_view text,
                                                 std::size_t n = kDefaultShingleSize) const;

  private:
    void mix_into(std::uint64_t base, std::vector<std::uint64_t>& mins) const;

    std::uint64_t seed_;
    std::vector<std::uint64_t> mults_;
    std::vector<std::uint64_t> adds_;
};

// Fraction of signature slots that agree. Estimates Jaccard similarity of
// the shingle sets; signatures must be the same length.
double estimate_jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

// Exact Jaccard of two shingle sets: |intersection| / |union|; 1 when both
// are empty.
double exact_jaccard(const ShingleSet& a, const ShingleSet& b);

struct DedupOptions {
    std::size_t shingle_size{kDefaultShingleSize};
    std::size_t num_permutations{kDefaultNumPermutations};
    std::uint64_t seed{kDefaultMinhashSeed};
    // Off by default. When set (0 < t <= 1), a page whose estimated
    // similarity against any kept page reaches the threshold is also
    // dropped. This is quadratic in kept pages and meant for small corpora.
    double near_dup_threshold{0.0};
};

struct DedupOutcome {
    std::vector<PageRecord> kept;
    std::uint64_t dropped_exact{0};
    std::uint64_t dropped_near{0};
};

// Keeps the first page of every signature; later pages with a signature
// byte-for-byte equal to a kept one are dropped. Input order is preserved.
// Pre-computed signatures may be supplied (parallel to pages) to avoid
// recomputation; pass nullptr to compute here.
DedupOutcome dedup(std::vector<PageRecord> pages, const DedupOptions& options = {},
                   const std::vector<std::vector<std::uint64_t>>* signatures = nullptr,
                   std::vector<PageRecord>* dropped = nullptr);

}  // namespace darkcorpus
