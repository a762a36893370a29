#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "darkcorpus/page.hpp"

namespace darkcorpus {

// Char-count distribution summary. Quartiles use the nearest-rank rule:
// Q(p) is the ceil(p*n)-th smallest value (1-based), so Q2 of {1,2,3,4}
// is 2 and Q3 is 3.
struct CharCountQuartiles {
    std::uint64_t n{0};
    std::uint64_t min{0};
    std::uint64_t max{0};
    std::uint64_t q1{0};
    std::uint64_t q2{0};
    std::uint64_t q3{0};
    double mean{0.0};
};

// Accumulates char counts; mergeable so shards can be combined.
class CharCountAccumulator {
  public:
    void add(std::uint64_t count) { counts_.push_back(count); }
    void merge(const CharCountAccumulator& other);
    CharCountQuartiles finalize() const;

  private:
    mutable std::vector<std::uint64_t> counts_;
};

// How many distinct words of each character length the corpus contains.
// A word is a maximal whitespace-free run; each distinct word counts once
// corpus-wide no matter how often it repeats. Distinctness is tracked by
// 64-bit word hash.
class WordLengthHistogram {
  public:
    void add_text(std::string_view text);
    void merge(const WordLengthHistogram& other);
    const std::map<std::uint64_t, std::uint64_t>& counts() const;
    std::uint64_t unique_words() const;

  private:
    mutable std::map<std::uint64_t, std::uint64_t> finalized_;
    std::map<std::uint64_t, std::unordered_set<std::uint64_t>> seen_;
};

// Byte-shrinkage per category across the pipeline. Rates are fractions in
// [0, 1]: 1 - after/initial.
struct CategoryReduction {
    std::uint64_t bytes_initial{0};
    std::uint64_t bytes_after_dedup{0};
    std::uint64_t bytes_final{0};
    double dedup_rate{0.0};
    double total_reduction_rate{0.0};
};

struct ReductionReport {
    std::map<std::string, CategoryReduction> categories;
    CategoryReduction overall;
};

ReductionReport reduction_report(const CategoryDistribution& initial,
                                 const CategoryDistribution& after_dedup,
                                 const CategoryDistribution& final_dist);

// "5.37" for 0.0537: a percentage with exactly two decimals, no sign, no
// percent mark. Used anywhere rates are printed.
std::string format_rate_percent(double rate);

}  // namespace darkcorpus
