#include "darkcorpus/folds.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

std::vector<std::uint64_t> FoldAssignment::fold_sizes() const {
    std::vector<std::uint64_t> sizes(k, 0);
    for (std::uint32_t fold : fold_of) sizes[fold] += 1;
    return sizes;
}

FoldAssignment stratified_kfold(const std::vector<std::string>& labels, std::size_t k,
                                std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("fold count must be at least 1");

    // classes in sorted label order so the draw sequence is reproducible
    std::map<std::string, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(i);

    FoldAssignment out;
    out.k = k;
    out.seed = seed;
    out.fold_of.assign(labels.size(), 0);

    std::mt19937_64 rng(seed);
    std::size_t offset = 0;
    for (auto& [label, indices] : classes) {
        std::shuffle(indices.begin(), indices.end(), rng);
        // deal round-robin starting where the previous class stopped, so the
        // whole corpus forms one continuous deal and total fold sizes stay
        // within one of each other
        for (std::size_t j = 0; j < indices.size(); ++j) {
            out.fold_of[indices[j]] = static_cast<std::uint32_t>((offset + j) % k);
        }
        offset = (offset + indices.size()) % k;
    }
    return out;
}

std::vector<FoldAssignment> repeated_kfold(const std::vector<std::string>& labels, std::size_t k,
                                           std::size_t repetitions, std::uint64_t seed) {
    std::vector<FoldAssignment> out;
    out.reserve(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
        FoldAssignment assignment =
            stratified_kfold(labels, k, splitmix64(seed ^ static_cast<std::uint64_t>(r)));
        assignment.repetition = r;
        out.push_back(std::move(assignment));
    }
    return out;
}

}  // namespace darkcorpus
