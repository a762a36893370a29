#include "darkcorpus/density.hpp"

#include <stdexcept>

namespace darkcorpus {

DensityThresholds derive_thresholds(const CharCountQuartiles& quartiles) {
    DensityThresholds t;
    t.min_chars = quartiles.q1 / 2;
    t.max_chars = quartiles.q3 * 2;
    if (t.min_chars == 0) {
        throw std::invalid_argument(
            "derived minimum is zero (q1 < 2); thresholds must be set explicitly");
    }
    return t;
}

DensityOutcome filter_by_density(std::vector<PageRecord> pages, const DensityThresholds& t,
                                 std::vector<PageRecord>* dropped) {
    DensityOutcome out;
    out.kept.reserve(pages.size());
    for (auto& page : pages) {
        if (passes_density(page.char_count, t)) {
            out.kept.push_back(std::move(page));
            continue;
        }
        if (page.char_count < t.min_chars) {
            ++out.dropped_short;
        } else {
            ++out.dropped_long;
        }
        if (dropped) {
            page.status = "dropped:density_filter";
            dropped->push_back(std::move(page));
        }
    }
    return out;
}

}  // namespace darkcorpus
