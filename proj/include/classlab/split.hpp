#pragma once

// Train/test splitting. Stratified by default: each class is partitioned
// separately so per-class proportions in the training fold match the source
// within one sample per class. Splits are deterministic in (dataset order,
// fraction, seed, stratified).

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "classlab/dataset.hpp"
#include "classlab/rng.hpp"

namespace classlab {

struct SplitPair {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;  // row indices into the source dataset
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
};

inline SplitPair split(const Dataset& ds, double fraction, std::uint64_t seed,
                       bool stratified = true) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split: fraction must lie in (0,1)");

    Rng rng = Rng::stream(seed, /*stream_id=*/0xA11CE);
    std::vector<std::size_t> train_idx, test_idx;

    if (stratified) {
        for (int cls = 0; cls < 2; ++cls) {
            std::vector<std::size_t> members;
            for (std::size_t r = 0; r < ds.n_rows(); ++r)
                if (ds.labels[r] == cls) members.push_back(r);
            if (members.size() < 2)
                throw std::invalid_argument(
                    "split: class " + std::to_string(cls) +
                    " too small to stratify (needs at least one sample per side)");
            rng.shuffle(members);
            auto n_train = static_cast<std::size_t>(
                std::llround(fraction * static_cast<double>(members.size())));
            n_train = std::max<std::size_t>(1, std::min(members.size() - 1, n_train));
            train_idx.insert(train_idx.end(), members.begin(), members.begin() + n_train);
            test_idx.insert(test_idx.end(), members.begin() + n_train, members.end());
        }
    } else {
        std::vector<std::size_t> order(ds.n_rows());
        for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
        rng.shuffle(order);
        auto n_train = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(order.size())));
        n_train = std::max<std::size_t>(1, std::min(order.size() - 1, n_train));
        train_idx.assign(order.begin(), order.begin() + n_train);
        test_idx.assign(order.begin() + n_train, order.end());
    }

    SplitPair pair;
    pair.train = ds.subset(train_idx);
    pair.test = ds.subset(test_idx);
    pair.train_indices = std::move(train_idx);
    pair.test_indices = std::move(test_idx);
    pair.seed = seed;
    pair.train_fraction = fraction;
    return pair;
}

}  // namespace classlab
