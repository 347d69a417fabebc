#pragma once

// Nonlinear decision trees with power-law split rules.
//
// Each conditional node carries a rule
//     f(x) = sum_i w_i * B_i + theta1              (m = 0)
//     f(x) = |sum_i w_i * B_i + theta1| - theta2   (m = 1)
// where B_i = prod_j x_j^{b_ij} with integer exponents from a small set E,
// evaluated on features normalized per-feature to [1,2] (fit on training
// data; the strictly positive domain keeps negative exponents total).
// A row is routed to the left child iff f(x) <= 0.
//
// Rules are derived per node by bilevel search: the upper level explores
// exponent matrices B and the modulus flag m to minimize the rule complexity
// F_U (count of nonzero exponents, duplicate rows collapsed), subject to the
// split impurity F_L reached by the lower level being at most tau_I; the
// lower level is a real-coded evolutionary search over weights and biases in
// [-1,1] minimizing F_L (child-size-weighted Gini of the induced partition).

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "classlab/cart.hpp"
#include "classlab/dataset.hpp"
#include "classlab/rng.hpp"
#include "classlab/transform.hpp"

namespace classlab::nldt {

inline constexpr double kDomainFloor = 1e-6;  // prediction-time clamp on normalized values

struct NldtParams {
    int n_power_laws = 3;                                  // p
    std::vector<int> exponent_set = {-3, -2, -1, 0, 1, 2, 3};
    double tau_impurity = 0.05;                            // tau_I
    int max_depth = 5;
    int min_node_size = 10;
    double leaf_purity_tol = 0.01;
    int lower_population = 40;
    int lower_generations = 50;
    int upper_population = 40;
    int upper_generations = 30;
    int upper_stall_limit = 10;  // stop after this many stagnant generations once feasible
    std::uint64_t seed = 0;
};

struct PowerLawRule {
    int p = 0;
    int d = 0;
    std::vector<int> exponents;    // p*d row-major; exponents[i*d + j] = b_ij
    bool use_modulus = false;      // m
    std::vector<double> weights;   // p entries in [-1,1]
    double theta1 = 0.0;           // in [-1,1]
    double theta2 = 0.0;           // in [-1,1], meaningful iff use_modulus
    double f_l = 1.0;              // split impurity recorded at fit time
    bool feasible = false;

    int exponent(int law, int feature) const {
        return exponents[static_cast<std::size_t>(law * d + feature)];
    }
};

namespace detail {

inline double ipow(double x, int e) {
    double base = e < 0 ? 1.0 / x : x;
    int n = e < 0 ? -e : e;
    double result = 1.0;
    while (n-- > 0) result *= base;
    return result;
}

}  // namespace detail

// Evaluates the rule on a normalized feature vector. Throws if the result is
// non-finite, which can only happen when the domain precondition is violated.
inline double eval_rule(const PowerLawRule& rule, std::span<const double> x_normalized) {
    if (static_cast<int>(x_normalized.size()) != rule.d)
        throw std::invalid_argument("eval_rule: dimension mismatch");
    double sum = rule.theta1;
    for (int i = 0; i < rule.p; ++i) {
        double law = 1.0;
        for (int j = 0; j < rule.d; ++j) {
            const int e = rule.exponent(i, j);
            if (e != 0) law *= detail::ipow(x_normalized[static_cast<std::size_t>(j)], e);
        }
        sum += rule.weights[static_cast<std::size_t>(i)] * law;
    }
    const double value = rule.use_modulus ? std::fabs(sum) - rule.theta2 : sum;
    if (!std::isfinite(value))
        throw std::runtime_error("eval_rule: non-finite rule value (x outside domain?)");
    return value;
}

// F_U: count of nonzero exponents, with identical power-law rows collapsed
// (their weights merge, so duplicates add no complexity).
inline int rule_complexity(const PowerLawRule& rule) {
    std::vector<std::span<const int>> seen;
    int count = 0;
    for (int i = 0; i < rule.p; ++i) {
        const std::span<const int> row(rule.exponents.data() + i * rule.d,
                                       static_cast<std::size_t>(rule.d));
        bool duplicate = false;
        for (const auto& other : seen) {
            if (std::equal(row.begin(), row.end(), other.begin())) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        seen.push_back(row);
        for (int e : row)
            if (e != 0) ++count;
    }
    return count;
}

// Distinct features used by the rule (nonzero exponent in any law).
inline int rule_variable_count(const PowerLawRule& rule) {
    int count = 0;
    for (int j = 0; j < rule.d; ++j) {
        for (int i = 0; i < rule.p; ++i) {
            if (rule.exponent(i, j) != 0) {
                ++count;
                break;
            }
        }
    }
    return count;
}

// F_L of the partition induced by the rule's sign over the given rows
// (<= 0 left). Returns the 1.0 sentinel when a child is empty.
inline double split_impurity(const PowerLawRule& rule, const Matrix& x_normalized,
                             const std::vector<int>& labels,
                             std::span<const std::size_t> rows) {
    cart::ClassCounts left = {0, 0}, right = {0, 0};
    for (auto r : rows) {
        const double f = eval_rule(rule, x_normalized.row(r));
        (f <= 0.0 ? left : right)[static_cast<std::size_t>(labels[r])]++;
    }
    if (left[0] + left[1] == 0 || right[0] + right[1] == 0) return 1.0;
    return cart::split_quality(left, right);
}

struct LowerResult {
    std::vector<double> weights;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double f_l = 1.0;
};

namespace detail {

// Per-node evaluation context: power lookup table over the node's rows plus
// a memo of lower-level results per (B, m) candidate.
class NodeSearch {
public:
    NodeSearch(const Matrix& x_normalized, const std::vector<int>& labels,
               std::vector<std::size_t> rows, const NldtParams& params)
        : x_(x_normalized),
          labels_(labels),
          rows_(std::move(rows)),
          params_(params),
          d_(static_cast<int>(x_normalized.cols())),
          n_exp_(static_cast<int>(params.exponent_set.size())) {
        if (std::find(params_.exponent_set.begin(), params_.exponent_set.end(), 0) ==
            params_.exponent_set.end())
            throw std::invalid_argument("nldt: exponent set must contain 0");
        build_power_table();
    }

    const std::vector<std::size_t>& rows() const { return rows_; }
    int dims() const { return d_; }

    // Lower-level search for a fixed (B, m). Results are memoized.
    LowerResult lower_search(const std::vector<int>& exponents, bool use_modulus,
                             std::uint64_t seed, int generations_override = 0) {
        std::string key(reinterpret_cast<const char*>(exponents.data()),
                        exponents.size() * sizeof(int));
        key.push_back(use_modulus ? '\1' : '\0');
        if (generations_override == 0) {
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        const LowerResult result = run_lower(exponents, use_modulus, seed,
                                             generations_override == 0
                                                 ? params_.lower_generations
                                                 : generations_override);
        if (generations_override == 0) memo_.emplace(std::move(key), result);
        return result;
    }

private:
    void build_power_table() {
        // powers_[(r_local * d + j) * n_exp + k] = x(row_r, j) ^ exponent_set[k]
        powers_.resize(rows_.size() * static_cast<std::size_t>(d_) *
                       static_cast<std::size_t>(n_exp_));
        for (std::size_t rl = 0; rl < rows_.size(); ++rl) {
            for (int j = 0; j < d_; ++j) {
                const double x = x_(rows_[rl], static_cast<std::size_t>(j));
                double* slot = &powers_[(rl * static_cast<std::size_t>(d_) +
                                         static_cast<std::size_t>(j)) *
                                        static_cast<std::size_t>(n_exp_)];
                for (int k = 0; k < n_exp_; ++k) slot[k] = ipow(x, params_.exponent_set[k]);
            }
        }
    }

    int exponent_index(int e) const {
        for (int k = 0; k < n_exp_; ++k)
            if (params_.exponent_set[k] == e) return k;
        throw std::invalid_argument("nldt: exponent outside the configured set");
    }

    // law_values[r_local * p + i] = B_i(x_r)
    void compute_law_values(const std::vector<int>& exponents, std::vector<double>& out) const {
        const int p = params_.n_power_laws;
        out.assign(rows_.size() * static_cast<std::size_t>(p), 1.0);
        // gather nonzero (feature, exponent index) pairs per law
        for (int i = 0; i < p; ++i) {
            std::vector<std::pair<int, int>> nz;
            for (int j = 0; j < d_; ++j) {
                const int e = exponents[static_cast<std::size_t>(i * d_ + j)];
                if (e != 0) nz.emplace_back(j, exponent_index(e));
            }
            if (nz.empty()) continue;
            for (std::size_t rl = 0; rl < rows_.size(); ++rl) {
                const double* base = &powers_[rl * static_cast<std::size_t>(d_) *
                                              static_cast<std::size_t>(n_exp_)];
                double v = 1.0;
                for (const auto& [j, k] : nz)
                    v *= base[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_exp_) +
                              static_cast<std::size_t>(k)];
                out[rl * static_cast<std::size_t>(p) + static_cast<std::size_t>(i)] = v;
            }
        }
    }

    // Best threshold c in [-1, 1] for the partition {v <= c | v > c},
    // minimizing the weighted child Gini. Exact 1-D scan over midpoints of
    // consecutive sorted values. Returns {impurity, threshold}; the 1.0
    // sentinel when no cut in range yields two non-empty children.
    std::pair<double, double> best_threshold(std::vector<std::pair<double, int>>& scored) const {
        std::sort(scored.begin(), scored.end());
        cart::ClassCounts left = {0, 0}, right = {0, 0};
        for (const auto& [v, y] : scored) right[static_cast<std::size_t>(y)]++;
        double best_impurity = 1.0;
        double best_cut = 0.0;
        bool found = false;
        for (std::size_t i = 0; i + 1 < scored.size(); ++i) {
            left[static_cast<std::size_t>(scored[i].second)]++;
            right[static_cast<std::size_t>(scored[i].second)]--;
            if (scored[i].first == scored[i + 1].first) continue;
            const double cut = 0.5 * (scored[i].first + scored[i + 1].first);
            if (cut < -1.0 || cut > 1.0) continue;
            const double s = cart::split_quality(left, right);
            if (!found || s < best_impurity) {
                best_impurity = s;
                best_cut = cut;
                found = true;
            }
        }
        if (!found) {
            // keep the threshold inside the box even when degenerate
            const double mid = scored.empty() ? 0.0
                                              : 0.5 * (scored.front().first +
                                                       scored.back().first);
            best_cut = std::min(1.0, std::max(-1.0, mid));
        }
        return {found ? best_impurity : 1.0, best_cut};
    }

    // Impurity of a weight genome with the free bias solved exactly:
    // m = 0: f = sum(w B) + theta1, theta1 = -c* from the threshold scan;
    // m = 1: f = |sum(w B) + theta1| - theta2 with theta1 a gene and
    //        theta2 = c* from the scan over the absolute scores.
    struct LowerEval {
        double f_l = 1.0;
        double theta1 = 0.0;
        double theta2 = 0.0;
    };

    LowerEval impurity_of(const std::vector<double>& law_values,
                          std::span<const double> genome, bool use_modulus,
                          std::vector<std::pair<double, int>>& scratch) const {
        const int p = params_.n_power_laws;
        scratch.clear();
        scratch.reserve(rows_.size());
        LowerEval result;
        if (!use_modulus) {
            for (std::size_t rl = 0; rl < rows_.size(); ++rl) {
                const double* lv = &law_values[rl * static_cast<std::size_t>(p)];
                double s = 0.0;
                for (int i = 0; i < p; ++i) s += genome[static_cast<std::size_t>(i)] * lv[i];
                scratch.emplace_back(s, labels_[rows_[rl]]);
            }
            const auto [impurity, cut] = best_threshold(scratch);
            result.f_l = impurity;
            result.theta1 = -cut;  // f <= 0  <=>  s <= cut
        } else {
            const double theta1 = genome[static_cast<std::size_t>(p)];
            for (std::size_t rl = 0; rl < rows_.size(); ++rl) {
                const double* lv = &law_values[rl * static_cast<std::size_t>(p)];
                double s = theta1;
                for (int i = 0; i < p; ++i) s += genome[static_cast<std::size_t>(i)] * lv[i];
                scratch.emplace_back(std::fabs(s), labels_[rows_[rl]]);
            }
            const auto [impurity, cut] = best_threshold(scratch);
            result.f_l = impurity;
            result.theta1 = theta1;
            result.theta2 = cut;  // f <= 0  <=>  |s| <= theta2
        }
        return result;
    }

    LowerResult run_lower(const std::vector<int>& exponents, bool use_modulus,
                          std::uint64_t seed, int generations) {
        std::vector<double> law_values;
        compute_law_values(exponents, law_values);

        const int p = params_.n_power_laws;
        const int dim = p + (use_modulus ? 1 : 0);  // biases solved by scan
        const int pop_size = params_.lower_population;
        Rng rng(seed);
        std::vector<std::pair<double, int>> scratch;

        std::vector<std::vector<double>> pop(static_cast<std::size_t>(pop_size));
        std::vector<LowerEval> evals(static_cast<std::size_t>(pop_size));
        for (auto& genome : pop) {
            genome.resize(static_cast<std::size_t>(dim));
            for (auto& g : genome) g = rng.uniform(-1.0, 1.0);
        }
        for (std::size_t i = 0; i < pop.size(); ++i)
            evals[i] = impurity_of(law_values, pop[i], use_modulus, scratch);

        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (evals[i].f_l < evals[best].f_l) best = i;

        int stagnant = 0;
        for (int gen = 0; gen < generations && evals[best].f_l > 0.0 && stagnant < 12;
             ++gen) {
            // mutation scale anneals from exploration to refinement
            const double sigma =
                0.25 * (1.0 - static_cast<double>(gen) / generations) + 0.02;
            std::vector<std::vector<double>> next;
            std::vector<LowerEval> next_evals;
            next.reserve(pop.size());
            next.push_back(pop[best]);
            next_evals.push_back(evals[best]);
            while (next.size() < pop.size()) {
                const auto& pa = pop[tournament(rng, evals)];
                const auto& pb = pop[tournament(rng, evals)];
                std::vector<double> child(static_cast<std::size_t>(dim));
                for (int g = 0; g < dim; ++g) {
                    // blend crossover with bounded Gaussian mutation
                    const double u = rng.uniform(-0.25, 1.25);
                    double v = pa[static_cast<std::size_t>(g)] +
                               u * (pb[static_cast<std::size_t>(g)] -
                                    pa[static_cast<std::size_t>(g)]);
                    if (rng.bernoulli(0.25)) v += rng.normal(0.0, sigma);
                    child[static_cast<std::size_t>(g)] = std::min(1.0, std::max(-1.0, v));
                }
                next_evals.push_back(impurity_of(law_values, child, use_modulus, scratch));
                next.push_back(std::move(child));
            }
            const double previous_best = evals[best].f_l;
            pop = std::move(next);
            evals = std::move(next_evals);
            best = 0;
            for (std::size_t i = 1; i < pop.size(); ++i)
                if (evals[i].f_l < evals[best].f_l) best = i;
            stagnant = evals[best].f_l < previous_best - 1e-15 ? 0 : stagnant + 1;
        }

        LowerResult result;
        result.weights.assign(pop[best].begin(), pop[best].begin() + p);
        result.theta1 = evals[best].theta1;
        result.theta2 = evals[best].theta2;
        result.f_l = evals[best].f_l;
        return result;
    }

    std::size_t tournament(Rng& rng, const std::vector<LowerEval>& evals) const {
        const std::size_t a = rng.uniform_index(evals.size());
        const std::size_t b = rng.uniform_index(evals.size());
        return evals[a].f_l <= evals[b].f_l ? a : b;
    }

    const Matrix& x_;
    const std::vector<int>& labels_;
    std::vector<std::size_t> rows_;
    const NldtParams& params_;
    int d_;
    int n_exp_;
    std::vector<double> powers_;
    std::unordered_map<std::string, LowerResult> memo_;
};

struct UpperIndividual {
    std::vector<int> exponents;
    bool use_modulus = false;
    LowerResult lower;
    int f_u = 0;
    bool feasible = false;
};

// Feasibility-first lexicographic ordering: feasible beats infeasible;
// among feasible, smaller F_U then smaller F_L; among infeasible, smaller F_L.
inline bool upper_better(const UpperIndividual& a, const UpperIndividual& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (a.feasible) {
        if (a.f_u != b.f_u) return a.f_u < b.f_u;
        return a.lower.f_l < b.lower.f_l;
    }
    return a.lower.f_l < b.lower.f_l;
}

}  // namespace detail

// Lower-level search: minimizes F_L over weights and biases in [-1,1] for a
// fixed exponent matrix and modulus flag. Deterministic per seed.
inline LowerResult lower_level_search(const Matrix& x_normalized,
                                      const std::vector<int>& labels,
                                      const std::vector<std::size_t>& rows,
                                      const std::vector<int>& exponents, bool use_modulus,
                                      const NldtParams& params, std::uint64_t seed,
                                      int generations_override = 0) {
    detail::NodeSearch search(x_normalized, labels, rows, params);
    return search.lower_search(exponents, use_modulus, seed, generations_override);
}

namespace detail {

inline std::size_t tournament(Rng& rng, const std::vector<UpperIndividual>& pop) {
    const std::size_t a = rng.uniform_index(pop.size());
    const std::size_t b = rng.uniform_index(pop.size());
    return upper_better(pop[b], pop[a]) ? b : a;
}

inline PowerLawRule upper_search_impl(NodeSearch& search, const NldtParams& params,
                                      std::uint64_t seed) {
    const int p = params.n_power_laws;
    const int d = search.dims();
    const std::size_t genome_len = static_cast<std::size_t>(p) * static_cast<std::size_t>(d);
    Rng rng = Rng::stream(seed, 0x0B);

    std::vector<int> nonzero_exponents;
    for (int e : params.exponent_set)
        if (e != 0) nonzero_exponents.push_back(e);

    auto random_nonzero = [&]() {
        return nonzero_exponents[rng.uniform_index(nonzero_exponents.size())];
    };
    auto random_any = [&]() {
        return params.exponent_set[rng.uniform_index(params.exponent_set.size())];
    };
    auto lower_seed = [&](const std::vector<int>& genes, bool m) {
        // Deterministic per candidate so the memo stays consistent.
        std::uint64_t h = 0x811c9dc5u ^ seed;
        for (int g : genes) h = (h ^ static_cast<std::uint64_t>(g + 8)) * 0x100000001b3ULL;
        return h ^ (m ? 0x9e3779b9ULL : 0);
    };

    // Power laws commute under the weighted sum, so candidates are
    // canonicalized by sorting the exponent rows; this collapses equivalent
    // genomes in the memo and in the population.
    auto canonicalize = [&](std::vector<int>& genes) {
        std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i)
            rows_of[static_cast<std::size_t>(i)].assign(genes.begin() + i * d,
                                                        genes.begin() + (i + 1) * d);
        std::sort(rows_of.begin(), rows_of.end());
        for (int i = 0; i < p; ++i)
            std::copy(rows_of[static_cast<std::size_t>(i)].begin(),
                      rows_of[static_cast<std::size_t>(i)].end(), genes.begin() + i * d);
    };

    auto evaluate = [&](UpperIndividual& ind) {
        canonicalize(ind.exponents);
        ind.lower = search.lower_search(ind.exponents, ind.use_modulus,
                                        lower_seed(ind.exponents, ind.use_modulus));
        PowerLawRule probe;
        probe.p = p;
        probe.d = d;
        probe.exponents = ind.exponents;
        ind.f_u = rule_complexity(probe);
        // A rule with no active exponent cannot split; complexity 0 is only
        // reachable as infeasible.
        ind.feasible = ind.f_u > 0 && ind.lower.f_l <= params.tau_impurity;
    };

    const double init_rate = std::min(0.5, 3.0 / static_cast<double>(d));
    std::vector<UpperIndividual> pop(static_cast<std::size_t>(params.upper_population));
    for (std::size_t idx = 0; idx < pop.size(); ++idx) {
        auto& ind = pop[idx];
        ind.exponents.assign(genome_len, 0);
        if (idx < 6 && idx < static_cast<std::size_t>(d)) {
            // seed a few single-feature candidates: one linear exponent
            const std::size_t j = d <= 6 ? idx : rng.uniform_index(static_cast<std::size_t>(d));
            ind.exponents[j] = 1;
        } else {
            for (auto& g : ind.exponents)
                if (rng.bernoulli(init_rate)) g = random_nonzero();
        }
        ind.use_modulus = rng.bernoulli(0.5);
        evaluate(ind);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (upper_better(pop[i], pop[best])) best = i;

    const double gene_mut_rate = 2.0 / static_cast<double>(genome_len);
    int stall = 0;
    for (int gen = 0; gen < params.upper_generations; ++gen) {
        if (pop[best].feasible && pop[best].f_u <= 1) break;  // global minimum reached
        if (pop[best].feasible && stall >= params.upper_stall_limit) break;

        std::vector<UpperIndividual> next;
        next.reserve(pop.size());
        next.push_back(pop[best]);
        while (next.size() < pop.size()) {
            const auto& pa = pop[tournament(rng, pop)];
            const auto& pb = pop[tournament(rng, pop)];
            UpperIndividual child;
            child.exponents.resize(genome_len);
            for (std::size_t g = 0; g < genome_len; ++g)
                child.exponents[g] = rng.bernoulli(0.5) ? pa.exponents[g] : pb.exponents[g];
            child.use_modulus = rng.bernoulli(0.5) ? pa.use_modulus : pb.use_modulus;
            for (std::size_t g = 0; g < genome_len; ++g)
                if (rng.bernoulli(gene_mut_rate)) child.exponents[g] = random_any();
            if (rng.bernoulli(0.1)) child.use_modulus = !child.use_modulus;
            evaluate(child);
            next.push_back(std::move(child));
        }
        const bool was_feasible = pop[best].feasible;
        const int previous_f_u = pop[best].f_u;
        pop = std::move(next);
        best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (upper_better(pop[i], pop[best])) best = i;
        // stall tracks the actual upper objective (feasibility, then F_U);
        // F_L tie-break jitter among equal-F_U rules does not reset it
        if ((pop[best].feasible && !was_feasible) ||
            (pop[best].feasible && pop[best].f_u < previous_f_u)) {
            stall = 0;
        } else {
            ++stall;
        }
    }

    PowerLawRule rule;
    rule.p = p;
    rule.d = d;
    rule.exponents = pop[best].exponents;
    rule.use_modulus = pop[best].use_modulus;
    rule.weights = pop[best].lower.weights;
    rule.theta1 = pop[best].lower.theta1;
    rule.theta2 = pop[best].lower.theta2;
    rule.f_l = pop[best].lower.f_l;
    rule.feasible = pop[best].feasible;
    return rule;
}

}  // namespace detail

// Upper-level search: derives the simplest feasible split rule for the rows.
// Throws std::invalid_argument on a pure node. When no candidate meets tau_I
// within budget, the best rule is returned with feasible = false.
inline PowerLawRule upper_level_search(const Matrix& x_normalized,
                                       const std::vector<int>& labels,
                                       const std::vector<std::size_t>& rows,
                                       const NldtParams& params, std::uint64_t seed) {
    cart::ClassCounts counts = {0, 0};
    for (auto r : rows) counts[static_cast<std::size_t>(labels[r])]++;
    if (counts[0] == 0 || counts[1] == 0)
        throw std::invalid_argument("upper_level_search: node is pure");
    detail::NodeSearch search(x_normalized, labels, rows, params);
    return detail::upper_search_impl(search, params, seed);
}

struct NldtNode {
    bool is_leaf = true;
    int label = 0;
    cart::ClassCounts counts = {0, 0};
    PowerLawRule rule;  // valid iff !is_leaf
    int left = -1;
    int right = -1;
};

class NldtTree {
public:
    std::vector<NldtNode> nodes;  // root at 0
    FeatureTransform transform;
    NldtParams params;
    int infeasible_leaves = 0;  // nodes turned into leaves by an infeasible search

    int predict(std::span<const double> x_raw) const {
        std::vector<double> x = transform.apply(x_raw);
        for (auto& v : x) v = std::max(v, kDomainFloor);
        std::size_t idx = 0;
        while (!nodes[idx].is_leaf) {
            const double f = eval_rule(nodes[idx].rule, x);
            idx = static_cast<std::size_t>(f <= 0.0 ? nodes[idx].left : nodes[idx].right);
        }
        return nodes[idx].label;
    }

    int conditional_node_count() const {
        int count = 0;
        for (const auto& n : nodes)
            if (!n.is_leaf) ++count;
        return count;
    }

    nlohmann::json to_json() const;
    static NldtTree from_json(const nlohmann::json& j);
};

// Complexity: total variables over all conditional nodes (distinct features
// with a nonzero exponent, per node, summed).
inline int nldt_complexity(const NldtTree& tree) {
    int total = 0;
    for (const auto& n : tree.nodes)
        if (!n.is_leaf) total += rule_variable_count(n.rule);
    return total;
}

// Post-fit audit: every conditional node must carry a feasible rule
// (recorded F_L <= tau_I) with all parameters inside their bounds and all
// exponents inside the configured set. Returns human-readable violations.
inline std::vector<std::string> audit_tree(const NldtTree& tree) {
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& node = tree.nodes[i];
        if (node.is_leaf) continue;
        const auto& rule = node.rule;
        const std::string where = "node " + std::to_string(i) + ": ";
        if (!(rule.f_l <= tree.params.tau_impurity))
            violations.push_back(where + "F_L " + std::to_string(rule.f_l) +
                                 " exceeds tau_I");
        if (!rule.feasible) violations.push_back(where + "rule flagged infeasible");
        for (double w : rule.weights)
            if (w < -1.0 || w > 1.0) violations.push_back(where + "weight out of [-1,1]");
        if (rule.theta1 < -1.0 || rule.theta1 > 1.0)
            violations.push_back(where + "theta1 out of [-1,1]");
        if (rule.use_modulus && (rule.theta2 < -1.0 || rule.theta2 > 1.0))
            violations.push_back(where + "theta2 out of [-1,1]");
        for (int e : rule.exponents) {
            if (std::find(tree.params.exponent_set.begin(), tree.params.exponent_set.end(),
                          e) == tree.params.exponent_set.end()) {
                violations.push_back(where + "exponent outside configured set");
                break;
            }
        }
    }
    return violations;
}

namespace detail {

inline int build_nldt_node(NldtTree& tree, const Matrix& x_normalized,
                           const std::vector<int>& labels,
                           std::vector<std::size_t>& rows, int depth, int& node_counter) {
    NldtNode node;
    for (auto r : rows) node.counts[static_cast<std::size_t>(labels[r])]++;
    node.label = node.counts[1] > node.counts[0] ? 1 : 0;
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);

    const auto& params = tree.params;
    const double node_gini = cart::gini(node.counts);
    if (node_gini <= params.leaf_purity_tol || depth >= params.max_depth ||
        rows.size() < static_cast<std::size_t>(params.min_node_size))
        return index;

    const std::uint64_t node_seed =
        classlab::detail::mix_seed(params.seed, static_cast<std::uint64_t>(node_counter++));
    NodeSearch search(x_normalized, labels, rows, params);
    PowerLawRule rule = upper_search_impl(search, params, node_seed);
    if (!rule.feasible) {
        tree.infeasible_leaves++;
        return index;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
        const double f = eval_rule(rule, x_normalized.row(r));
        (f <= 0.0 ? left_rows : right_rows).push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) {
        tree.infeasible_leaves++;
        return index;
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[static_cast<std::size_t>(index)].is_leaf = false;
    tree.nodes[static_cast<std::size_t>(index)].rule = std::move(rule);
    const int left = build_nldt_node(tree, x_normalized, labels, left_rows, depth + 1,
                                     node_counter);
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    const int right = build_nldt_node(tree, x_normalized, labels, right_rows, depth + 1,
                                      node_counter);
    tree.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
}

}  // namespace detail

inline NldtTree fit_nldt(const Dataset& train, const NldtParams& params = {}) {
    validate_dataset(train, /*allow_single_class=*/true);
    NldtTree tree;
    tree.params = params;
    tree.transform = FeatureTransform::fit(train, 1.0, 2.0);
    const Matrix x_normalized = tree.transform.apply_matrix(train.features);
    std::vector<std::size_t> rows(train.n_rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    int node_counter = 0;
    detail::build_nldt_node(tree, x_normalized, train.labels, rows, 0, node_counter);
    return tree;
}

inline int predict_nldt(const NldtTree& tree, std::span<const double> x_raw) {
    return tree.predict(x_raw);
}

// Algebraic rendering of one rule, e.g.
//   |0.42*x2^2*x7^-1 - 0.5*x3 + 0.11| - 0.73
inline std::string render_rule(const PowerLawRule& rule,
                               const std::vector<std::string>& names = {}) {
    std::ostringstream out;
    out.precision(3);
    double constant = rule.theta1;
    std::vector<std::string> terms;
    for (int i = 0; i < rule.p; ++i) {
        std::string term;
        for (int j = 0; j < rule.d; ++j) {
            const int e = rule.exponent(i, j);
            if (e == 0) continue;
            const std::string fname = static_cast<std::size_t>(j) < names.size()
                                          ? names[static_cast<std::size_t>(j)]
                                          : "x" + std::to_string(j + 1);
            if (!term.empty()) term += "*";
            term += fname;
            if (e != 1) term += "^" + std::to_string(e);
        }
        if (term.empty()) {
            constant += rule.weights[static_cast<std::size_t>(i)];  // x^0 law folds into bias
        } else {
            std::ostringstream w;
            w.precision(3);
            w << rule.weights[static_cast<std::size_t>(i)];
            terms.push_back(w.str() + "*" + term);
        }
    }
    std::string body;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0) body += " + ";
        body += terms[i];
    }
    std::ostringstream c;
    c.precision(3);
    c << constant;
    if (body.empty()) body = c.str();
    else body += " + " + c.str();
    if (rule.use_modulus) {
        std::ostringstream t2;
        t2.precision(3);
        t2 << rule.theta2;
        out << "|" << body << "| - " << t2.str();
    } else {
        out << body;
    }
    return out.str();
}

// Indented tree rendering: each conditional node shows its rule; a row goes
// left when the rule value is <= 0.
inline std::string render_tree(const NldtTree& tree,
                               const std::vector<std::string>& names = {}) {
    std::ostringstream out;
    struct Walk {
        const NldtTree& t;
        const std::vector<std::string>& names;
        std::ostringstream& out;
        void operator()(std::size_t idx, int indent) {
            const auto& n = t.nodes[idx];
            const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
            if (n.is_leaf) {
                out << pad << "class " << n.label << "  (" << n.counts[0] << "/"
                    << n.counts[1] << ")\n";
                return;
            }
            out << pad << "if " << render_rule(n.rule, names) << " <= 0:\n";
            (*this)(static_cast<std::size_t>(n.left), indent + 1);
            out << pad << "else:\n";
            (*this)(static_cast<std::size_t>(n.right), indent + 1);
        }
    };
    Walk{tree, names, out}(0, 0);
    return out.str();
}

inline nlohmann::json NldtTree::to_json() const {
    nlohmann::json jnodes = nlohmann::json::array();
    for (const auto& n : nodes) {
        nlohmann::json jn;
        jn["leaf"] = n.is_leaf;
        jn["label"] = n.label;
        jn["counts"] = n.counts;
        if (!n.is_leaf) {
            nlohmann::json b = nlohmann::json::array();
            for (int i = 0; i < n.rule.p; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (int j = 0; j < n.rule.d; ++j) row.push_back(n.rule.exponent(i, j));
                b.push_back(row);
            }
            jn["B"] = b;
            jn["m"] = n.rule.use_modulus ? 1 : 0;
            jn["w"] = n.rule.weights;
            jn["thetas"] = n.rule.use_modulus
                               ? std::vector<double>{n.rule.theta1, n.rule.theta2}
                               : std::vector<double>{n.rule.theta1};
            jn["f_l"] = n.rule.f_l;
            jn["left"] = n.left;
            jn["right"] = n.right;
        }
        jnodes.push_back(jn);
    }
    return {{"method", "nldt"},
            {"transform", transform.to_json()},
            {"params",
             {{"n_power_laws", params.n_power_laws},
              {"exponent_set", params.exponent_set},
              {"tau_impurity", params.tau_impurity},
              {"max_depth", params.max_depth},
              {"min_node_size", params.min_node_size}}},
            {"nodes", jnodes}};
}

inline NldtTree NldtTree::from_json(const nlohmann::json& j) {
    NldtTree tree;
    tree.transform = FeatureTransform::from_json(j.at("transform"));
    tree.params.n_power_laws = j.at("params").at("n_power_laws").get<int>();
    tree.params.exponent_set = j.at("params").at("exponent_set").get<std::vector<int>>();
    tree.params.tau_impurity = j.at("params").at("tau_impurity").get<double>();
    tree.params.max_depth = j.at("params").at("max_depth").get<int>();
    tree.params.min_node_size = j.at("params").at("min_node_size").get<int>();
    for (const auto& jn : j.at("nodes")) {
        NldtNode n;
        n.is_leaf = jn.at("leaf").get<bool>();
        n.label = jn.at("label").get<int>();
        n.counts = jn.at("counts").get<cart::ClassCounts>();
        if (!n.is_leaf) {
            const auto& b = jn.at("B");
            n.rule.p = static_cast<int>(b.size());
            n.rule.d = static_cast<int>(b.at(0).size());
            for (const auto& row : b)
                for (const auto& e : row) n.rule.exponents.push_back(e.get<int>());
            n.rule.use_modulus = jn.at("m").get<int>() == 1;
            n.rule.weights = jn.at("w").get<std::vector<double>>();
            const auto thetas = jn.at("thetas").get<std::vector<double>>();
            n.rule.theta1 = thetas.at(0);
            n.rule.theta2 = thetas.size() > 1 ? thetas.at(1) : 0.0;
            n.rule.f_l = jn.at("f_l").get<double>();
            n.rule.feasible = true;
            n.left = jn.at("left").get<int>();
            n.right = jn.at("right").get<int>();
        }
        tree.nodes.push_back(std::move(n));
    }
    return tree;
}

}  // namespace classlab::nldt
