#include "darkcorpus/balance.hpp"

#include <algorithm>
#include <random>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

std::uint64_t BalanceOutcome::total_removed_pages() const {
    std::uint64_t total = 0;
    for (const auto& [category, count] : removed_pages) total += count;
    return total;
}

std::uint64_t category_seed(std::uint64_t seed, std::string_view category) {
    return splitmix64(seed ^ hash64(category));
}

BalanceOutcome balance_categories(std::vector<PageRecord> pages, const BalanceOptions& options,
                                  std::vector<PageRecord>* dropped) {
    // page indices and text bytes per category
    std::map<std::string, std::vector<std::size_t>> members;
    std::map<std::string, std::uint64_t> bytes;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        members[pages[i].category].push_back(i);
        bytes[pages[i].category] += pages[i].text.size();
    }

    BalanceOutcome out;
    std::vector<char> removed(pages.size(), 0);
    for (auto& [category, indices] : members) {
        std::uint64_t remaining = bytes[category];
        if (remaining <= options.cap_bytes) continue;
        std::mt19937_64 rng(category_seed(options.seed, category));
        std::shuffle(indices.begin(), indices.end(), rng);
        for (std::size_t idx : indices) {
            if (remaining <= options.cap_bytes) break;
            removed[idx] = 1;
            remaining -= pages[idx].text.size();
            out.removed_pages[category] += 1;
            out.removed_bytes[category] += pages[idx].text.size();
        }
    }

    out.kept.reserve(pages.size());
    for (std::size_t i = 0; i < pages.size(); ++i) {
        if (!removed[i]) {
            out.kept.push_back(std::move(pages[i]));
        } else if (dropped) {
            pages[i].status = "dropped:balance";
            dropped->push_back(std::move(pages[i]));
        }
    }
    return out;
}

}  // namespace darkcorpus
