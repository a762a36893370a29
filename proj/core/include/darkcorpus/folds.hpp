#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace darkcorpus {

// Fold index per item, same order as the labels passed in.
struct FoldAssignment {
    std::size_t k{0};
    std::uint64_t seed{0};
    std::size_t repetition{0};
    std::vector<std::uint32_t> fold_of;

    std::vector<std::uint64_t> fold_sizes() const;
};

// Stratified k-fold split. Every item lands in exactly one fold; within each
// class the per-fold counts differ by at most one, and so do the total fold
// sizes. Deterministic in (labels, k, seed).
FoldAssignment stratified_kfold(const std::vector<std::string>& labels, std::size_t k,
                                std::uint64_t seed);

// Repeated stratified k-fold; repetition r uses seed_r = splitmix64(seed ^ r).
std::vector<FoldAssignment> repeated_kfold(const std::vector<std::string>& labels, std::size_t k,
                                           std::size_t repetitions, std::uint64_t seed);

}  // namespace darkcorpus
