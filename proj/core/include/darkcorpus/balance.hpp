#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "darkcorpus/page.hpp"

namespace darkcorpus {

inline constexpr std::uint64_t kDefaultCapBytes = 1'000'000'000;  // 1.0 GB of text

struct BalanceOptions {
    std::uint64_t cap_bytes{kDefaultCapBytes};
    std::uint64_t seed{1};
};

struct BalanceOutcome {
    std::vector<PageRecord> kept;  // original relative order
    std::map<std::string, std::uint64_t> removed_pages;
    std::map<std::string, std::uint64_t> removed_bytes;
    std::uint64_t total_removed_pages() const;
};

// Derives the per-category removal seed from the run seed, so results do not
// depend on which other categories are present.
std::uint64_t category_seed(std::uint64_t seed, std::string_view category);

// Caps every category at cap_bytes of text by removing uniformly chosen pages
// of that category. Pages must already carry a category. Kept pages stay in
// their original relative order; removal is deterministic in the seed.
BalanceOutcome balance_categories(std::vector<PageRecord> pages, const BalanceOptions& options,
                                  std::vector<PageRecord>* dropped = nullptr);

}  // namespace darkcorpus
