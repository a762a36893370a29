#pragma once

#include <cstdint>
#include <vector>

#include "darkcorpus/page.hpp"
#include "darkcorpus/stats.hpp"

namespace darkcorpus {

// Page-length filter. A page is kept when
// min_chars <= char_count <= max_chars, both ends inclusive.
struct DensityThresholds {
    std::uint64_t min_chars{500};
    std::uint64_t max_chars{10000};
};

inline constexpr DensityThresholds kDefaultDensityThresholds{};

inline bool passes_density(std::uint64_t char_count, const DensityThresholds& t) {
    return char_count >= t.min_chars && char_count <= t.max_chars;
}

// Corpus-relative thresholds: floor(Q1 / 2) and 2 * Q3. Throws
// std::invalid_argument when the lower bound would be zero, which would let
// empty pages through.
DensityThresholds derive_thresholds(const CharCountQuartiles& quartiles);

struct DensityOutcome {
    std::vector<PageRecord> kept;
    std::uint64_t dropped_short{0};
    std::uint64_t dropped_long{0};
};

// Order-preserving filter; dropped pages get status "dropped:density_filter".
DensityOutcome filter_by_density(std::vector<PageRecord> pages, const DensityThresholds& t,
                                 std::vector<PageRecord>* dropped = nullptr);

}  // namespace darkcorpus
