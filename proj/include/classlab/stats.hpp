#pragma once

// Two-sided Wilcoxon rank-sum (Mann-Whitney U) test and small aggregation
// helpers. Exact permutation enumeration over midranks when the smaller
// sample has at most kExactLimit elements; otherwise the tie-corrected
// normal approximation with continuity correction.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace classlab::bench {

inline constexpr std::size_t kExactLimit = 10;

struct RankSumResult {
    double u_statistic = 0.0;  // U of the first sample
    double p_value = 1.0;
    bool significant = false;  // p < 0.05
};

namespace detail {

// Midranks of the combined sample; returns ranks aligned with (a then b).
inline std::vector<double> midranks(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < a.size(); ++i) order[i] = {a[i], i};
    for (std::size_t i = 0; i < b.size(); ++i) order[a.size() + i] = {b[i], a.size() + i};
    std::sort(order.begin(), order.end());
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && order[j + 1].first == order[i].first) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;  // average of i+1..j+1
        for (std::size_t k = i; k <= j; ++k) ranks[order[k].second] = rank;
        i = j + 1;
    }
    return ranks;
}

// Counts index subsets of size `remaining` whose rank sum is at least as
// extreme as the observed deviation. Plain recursion; the total work is
// C(n_a + n_b, n_a) <= C(20, 10).
inline void enumerate_extreme(const std::vector<double>& ranks, std::size_t next,
                              std::size_t remaining, double rank_sum, double mean_rank_sum,
                              double observed_dev, long long& extreme, long long& total) {
    if (remaining == 0) {
        ++total;
        if (std::fabs(rank_sum - mean_rank_sum) >= observed_dev - 1e-9) ++extreme;
        return;
    }
    if (ranks.size() - next < remaining) return;
    enumerate_extreme(ranks, next + 1, remaining - 1, rank_sum + ranks[next], mean_rank_sum,
                      observed_dev, extreme, total);
    enumerate_extreme(ranks, next + 1, remaining, rank_sum, mean_rank_sum, observed_dev,
                      extreme, total);
}

inline double normal_sf(double z) {  // P(Z > z)
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace detail

inline RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    const std::size_t n1 = a.size(), n2 = b.size();
    if (n1 < 2 || n2 < 2)
        throw std::invalid_argument("wilcoxon_rank_sum: need at least 2 samples per group");

    const std::vector<double> ranks = detail::midranks(a, b);
    double r1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
    const double u1 = r1 - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);

    RankSumResult result;
    result.u_statistic = u1;

    bool all_equal = true;
    for (std::size_t i = 1; i < ranks.size(); ++i)
        if (ranks[i] != ranks[0]) {
            all_equal = false;
            break;
        }
    if (all_equal) {
        result.p_value = 1.0;
        return result;
    }

    const double n = static_cast<double>(n1 + n2);
    const double mean_rank_sum = static_cast<double>(n1) * (n + 1.0) / 2.0;

    if (std::min(n1, n2) <= kExactLimit) {
        long long extreme = 0, total = 0;
        detail::enumerate_extreme(ranks, 0, n1, 0.0, mean_rank_sum,
                                  std::fabs(r1 - mean_rank_sum), extreme, total);
        result.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    } else {
        // tie correction: sum over tie groups of (t^3 - t)
        double tie_term = 0.0;
        std::vector<double> sorted(ranks);
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        const double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
        const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                           ((n + 1.0) - tie_term / (n * (n - 1.0)));
        if (var <= 0.0) {
            result.p_value = 1.0;
            return result;
        }
        const double z = (std::fabs(u1 - mu) - 0.5) / std::sqrt(var);
        result.p_value = std::min(1.0, 2.0 * detail::normal_sf(std::max(0.0, z)));
    }
    result.significant = result.p_value < 0.05;
    return result;
}

inline double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator); 0 for a single value.
inline double sample_std(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace classlab::bench
