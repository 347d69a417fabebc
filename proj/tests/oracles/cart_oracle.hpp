#pragma once

// Independent oracles for tree induction tests. These deliberately recompute
// everything from first principles (pair counting, exhaustive enumeration)
// and never call into the implementation under test.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "classlab/matrix.hpp"

namespace oracle {

// Gini via pair counting: probability that two independent draws (with
// replacement) from the node fall in different classes = 2*n0*n1 / N^2.
inline double gini_pairs(std::int64_t n0, std::int64_t n1) {
    const double n = static_cast<double>(n0 + n1);
    return 2.0 * static_cast<double>(n0) * static_cast<double>(n1) / (n * n);
}

inline double split_quality_pairs(std::int64_t l0, std::int64_t l1, std::int64_t r0,
                                  std::int64_t r1) {
    const double nl = static_cast<double>(l0 + l1);
    const double nr = static_cast<double>(r0 + r1);
    const double np = nl + nr;
    return (nl / np) * gini_pairs(l0, l1) + (nr / np) * gini_pairs(r0, r1);
}

// All midpoint thresholds between consecutive distinct values of a feature.
inline std::vector<double> candidate_thresholds(const classlab::Matrix& x,
                                                const std::vector<std::size_t>& rows,
                                                std::size_t feature) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (auto r : rows) values.push_back(x(r, feature));
    std::sort(values.begin(), values.end());
    std::vector<double> thresholds;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i] != values[i + 1]) thresholds.push_back(0.5 * (values[i] + values[i + 1]));
    return thresholds;
}

namespace detail {

inline std::int64_t majority_correct(const std::vector<int>& labels,
                                     const std::vector<std::size_t>& rows) {
    std::int64_t n0 = 0, n1 = 0;
    for (auto r : rows) (labels[r] == 0 ? n0 : n1)++;
    return std::max(n0, n1);
}

// Best number of correct predictions achievable on `rows` with a tree of
// the given remaining depth (0 = leaf only).
inline std::int64_t best_correct(const classlab::Matrix& x, const std::vector<int>& labels,
                                 const std::vector<std::size_t>& rows, int depth_left) {
    std::int64_t best = majority_correct(labels, rows);
    if (depth_left == 0 || rows.size() < 2) return best;
    for (std::size_t f = 0; f < x.cols(); ++f) {
        for (const double tau : candidate_thresholds(x, rows, f)) {
            std::vector<std::size_t> left, right;
            for (auto r : rows) (x(r, f) <= tau ? left : right).push_back(r);
            if (left.empty() || right.empty()) continue;
            const std::int64_t correct = best_correct(x, labels, left, depth_left - 1) +
                                         best_correct(x, labels, right, depth_left - 1);
            best = std::max(best, correct);
        }
    }
    return best;
}

}  // namespace detail

// Exhaustive maximum training accuracy over all axis trees of depth <= 2.
inline double best_depth2_accuracy(const classlab::Matrix& x, const std::vector<int>& labels) {
    std::vector<std::size_t> rows(x.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    return static_cast<double>(detail::best_correct(x, labels, rows, 2)) /
           static_cast<double>(rows.size());
}

// Overwrites `labels` with the output of a random axis tree of depth 1 or 2,
// producing a dataset realizable at depth <= 2.
template <class RngT>
inline void relabel_with_random_depth2_tree(const classlab::Matrix& x,
                                            std::vector<int>& labels, RngT& rng) {
    const std::size_t d = x.cols();
    const int depth = 1 + static_cast<int>(rng.uniform_index(2));
    const std::size_t f0 = rng.uniform_index(d);
    const double t0 = rng.uniform();
    const std::size_t f1 = rng.uniform_index(d), f2 = rng.uniform_index(d);
    const double t1 = rng.uniform(), t2 = rng.uniform();
    const int leaf_ll = static_cast<int>(rng.uniform_index(2));
    const int leaf_lr = static_cast<int>(rng.uniform_index(2));
    const int leaf_rl = static_cast<int>(rng.uniform_index(2));
    const int leaf_rr = static_cast<int>(rng.uniform_index(2));
    for (std::size_t r = 0; r < x.rows(); ++r) {
        if (depth == 1) {
            labels[r] = x(r, f0) <= t0 ? leaf_ll : leaf_rr;
        } else if (x(r, f0) <= t0) {
            labels[r] = x(r, f1) <= t1 ? leaf_ll : leaf_lr;
        } else {
            labels[r] = x(r, f2) <= t2 ? leaf_rl : leaf_rr;
        }
    }
}

}  // namespace oracle
