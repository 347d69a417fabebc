#pragma once

// Genetic-programming classifier: expression trees over {+, -, *, /} with
// feature and constant leaves, evolved to minimize sigmoid cross-entropy
// plus a parsimony penalty P_c * (node count). A tree classifies a point as
// class 1 when its output is positive.
//
// Trees are stored in preorder in a flat vector; the subtree rooted at i
// occupies the contiguous range [i, i + nodes[i].subtree_size), which makes
// subtree crossover a pair of range splices.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "classlab/dataset.hpp"
#include "classlab/rng.hpp"

namespace classlab::gp {

inline constexpr double kProtectEps = 1e-6;   // |denominator| below this -> 1.0
inline constexpr double kValueClamp = 1e100;  // keeps chained products finite
inline constexpr double kClipEps = 1e-12;     // sigmoid output clip

enum class Op : std::uint8_t { add, sub, mul, divide, feature, constant };

inline bool is_leaf_op(Op op) { return op == Op::feature || op == Op::constant; }

struct Node {
    Op op = Op::constant;
    int feature = 0;
    double value = 0.0;
    int subtree_size = 1;
};

struct GpTree {
    std::vector<Node> nodes;  // preorder; first node is the root

    int size() const { return static_cast<int>(nodes.size()); }

    int internal_count() const {
        int count = 0;
        for (const auto& n : nodes)
            if (!is_leaf_op(n.op)) ++count;
        return count;
    }

    int depth() const {
        std::size_t pos = 0;
        return depth_at(pos);
    }

    // Recomputes subtree_size for every node; call after structural edits.
    void refresh_sizes() {
        std::size_t pos = 0;
        refresh_at(pos);
    }

    static GpTree leaf_feature(int feature) {
        GpTree t;
        t.nodes.push_back({Op::feature, feature, 0.0, 1});
        return t;
    }

    static GpTree leaf_constant(double value) {
        GpTree t;
        t.nodes.push_back({Op::constant, 0, value, 1});
        return t;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& n : nodes) {
            switch (n.op) {
                case Op::add: arr.push_back("+"); break;
                case Op::sub: arr.push_back("-"); break;
                case Op::mul: arr.push_back("*"); break;
                case Op::divide: arr.push_back("/"); break;
                case Op::feature: arr.push_back("x" + std::to_string(n.feature + 1)); break;
                case Op::constant: arr.push_back(n.value); break;
            }
        }
        return arr;
    }

    static GpTree from_json(const nlohmann::json& arr) {
        GpTree t;
        for (const auto& item : arr) {
            Node n;
            if (item.is_number()) {
                n.op = Op::constant;
                n.value = item.get<double>();
            } else {
                const std::string s = item.get<std::string>();
                if (s == "+") n.op = Op::add;
                else if (s == "-") n.op = Op::sub;
                else if (s == "*") n.op = Op::mul;
                else if (s == "/") n.op = Op::divide;
                else {
                    n.op = Op::feature;
                    n.feature = std::stoi(s.substr(1)) - 1;
                }
            }
            t.nodes.push_back(n);
        }
        t.refresh_sizes();
        return t;
    }

private:
    int depth_at(std::size_t& pos) const {
        const Node& n = nodes[pos++];
        if (is_leaf_op(n.op)) return 0;
        const int left = depth_at(pos);
        const int right = depth_at(pos);
        return 1 + std::max(left, right);
    }

    int refresh_at(std::size_t& pos) {
        const std::size_t here = pos++;
        int size = 1;
        if (!is_leaf_op(nodes[here].op)) {
            size += refresh_at(pos);
            size += refresh_at(pos);
        }
        nodes[here].subtree_size = size;
        return size;
    }
};

namespace detail {

inline double clamp_value(double v) {
    if (v > kValueClamp) return kValueClamp;
    if (v < -kValueClamp) return -kValueClamp;
    return v;
}

inline double eval_at(const std::vector<Node>& nodes, std::size_t& pos,
                      std::span<const double> x) {
    const Node& n = nodes[pos++];
    switch (n.op) {
        case Op::feature: return x[static_cast<std::size_t>(n.feature)];
        case Op::constant: return n.value;
        default: break;
    }
    const double a = eval_at(nodes, pos, x);
    const double b = eval_at(nodes, pos, x);
    switch (n.op) {
        case Op::add: return clamp_value(a + b);
        case Op::sub: return clamp_value(a - b);
        case Op::mul: return clamp_value(a * b);
        case Op::divide: return std::fabs(b) < kProtectEps ? 1.0 : clamp_value(a / b);
        default: return 0.0;
    }
}

}  // namespace detail

inline double eval_tree(const GpTree& tree, std::span<const double> x) {
    std::size_t pos = 0;
    return detail::eval_at(tree.nodes, pos, x);
}

inline int predict(const GpTree& tree, std::span<const double> x) {
    return eval_tree(tree, x) > 0.0 ? 1 : 0;
}

// Sigmoid cross-entropy with output clipped to [kClipEps, 1 - kClipEps].
inline double gp_loss(const GpTree& tree, const Dataset& ds) {
    if (ds.n_rows() == 0) throw std::invalid_argument("gp_loss: empty dataset");
    double sum = 0.0;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const double f = eval_tree(tree, ds.features.row(r));
        double yhat = f >= 0.0 ? 1.0 / (1.0 + std::exp(-f))
                               : std::exp(f) / (1.0 + std::exp(f));
        yhat = std::min(1.0 - kClipEps, std::max(kClipEps, yhat));
        sum += ds.labels[r] == 1 ? -std::log(yhat) : -std::log(1.0 - yhat);
    }
    return sum / static_cast<double>(ds.n_rows());
}

inline double gp_fitness(const GpTree& tree, const Dataset& ds, double parsimony) {
    if (parsimony < 0.0) throw std::invalid_argument("gp_fitness: parsimony must be >= 0");
    return gp_loss(tree, ds) + parsimony * static_cast<double>(tree.size());
}

// Complexity: number of operator (internal) nodes.
inline int gp_complexity(const GpTree& tree) { return tree.internal_count(); }

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline void render_at(const std::vector<Node>& nodes, std::size_t& pos, std::string& out) {
    const Node& n = nodes[pos++];
    switch (n.op) {
        case Op::feature:
            out += "x" + std::to_string(n.feature + 1);
            return;
        case Op::constant:
            out += format_double(n.value);
            return;
        default: break;
    }
    out += "(";
    render_at(nodes, pos, out);
    switch (n.op) {
        case Op::add: out += " + "; break;
        case Op::sub: out += " - "; break;
        case Op::mul: out += " * "; break;
        case Op::divide: out += " / "; break;
        default: break;
    }
    render_at(nodes, pos, out);
    out += ")";
}

}  // namespace detail

// Fully parenthesized infix expression; features are printed 1-based (x1..xd)
// and constants with shortest round-trip formatting.
inline std::string render_expression(const GpTree& tree) {
    std::string out;
    std::size_t pos = 0;
    detail::render_at(tree.nodes, pos, out);
    return out;
}

struct GpConfig {
    int population_size = 500;
    int generations = 50;
    double parsimony = 0.001;  // P_c
    double crossover_prob = 0.9;
    double subtree_mutation_prob = 0.05;
    double point_mutation_prob = 0.05;
    int tournament_size = 7;
    double constant_min = -1.0;
    double constant_max = 1.0;
    int max_depth = 12;
    std::uint64_t seed = 0;
    std::vector<GpTree> initial_population;  // optional warm start
};

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double best_loss = 0.0;
    int best_size = 0;
    double mean_fitness = 0.0;
};

struct EvolveResult {
    GpTree best;
    double best_fitness = 0.0;
    double best_loss = 0.0;
    std::vector<GenerationStats> history;
};

namespace detail {

class Evolver {
public:
    Evolver(const Dataset& train, const GpConfig& config)
        : train_(train), cfg_(config), rng_(Rng::stream(config.seed, 0x6B)) {
        const double p_total = cfg_.crossover_prob + cfg_.subtree_mutation_prob +
                               cfg_.point_mutation_prob;
        if (cfg_.crossover_prob < 0 || cfg_.subtree_mutation_prob < 0 ||
            cfg_.point_mutation_prob < 0 || p_total > 1.0 + 1e-12)
            throw std::invalid_argument("gp: operator probabilities must sum to <= 1");
        if (cfg_.population_size < 1) throw std::invalid_argument("gp: empty population");
    }

    EvolveResult run() {
        std::vector<GpTree> pop = initial_population();
        std::vector<double> fitness(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) fitness[i] = fit(pop[i]);

        EvolveResult result;
        std::size_t best_idx = argmin(fitness);
        result.best = pop[best_idx];
        result.best_fitness = fitness[best_idx];
        record(result, 0, pop, fitness);

        for (int gen = 1; gen <= cfg_.generations; ++gen) {
            std::vector<GpTree> next;
            next.reserve(pop.size());
            next.push_back(pop[argmin(fitness)]);  // elite carries over
            while (next.size() < pop.size()) {
                const double r = rng_.uniform();
                if (r < cfg_.crossover_prob) {
                    next.push_back(crossover(pop[tournament(fitness)], pop[tournament(fitness)]));
                } else if (r < cfg_.crossover_prob + cfg_.subtree_mutation_prob) {
                    next.push_back(subtree_mutation(pop[tournament(fitness)]));
                } else if (r < cfg_.crossover_prob + cfg_.subtree_mutation_prob +
                                   cfg_.point_mutation_prob) {
                    next.push_back(point_mutation(pop[tournament(fitness)]));
                } else {
                    next.push_back(pop[tournament(fitness)]);
                }
            }
            pop = std::move(next);
            for (std::size_t i = 0; i < pop.size(); ++i) fitness[i] = fit(pop[i]);
            const std::size_t gen_best = argmin(fitness);
            if (fitness[gen_best] < result.best_fitness) {
                result.best = pop[gen_best];
                result.best_fitness = fitness[gen_best];
            }
            record(result, gen, pop, fitness);
        }
        result.best_loss = gp_loss(result.best, train_);
        return result;
    }

private:
    double fit(const GpTree& t) const { return gp_fitness(t, train_, cfg_.parsimony); }

    static std::size_t argmin(const std::vector<double>& v) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[best]) best = i;
        return best;
    }

    void record(EvolveResult& result, int gen, const std::vector<GpTree>& pop,
                const std::vector<double>& fitness) {
        GenerationStats s;
        s.generation = gen;
        s.best_fitness = result.best_fitness;
        s.best_loss = gp_loss(result.best, train_);
        s.best_size = result.best.size();
        double total = 0.0;
        for (double f : fitness) total += f;
        s.mean_fitness = total / static_cast<double>(pop.size());
        result.history.push_back(s);
    }

    std::size_t tournament(const std::vector<double>& fitness) {
        std::size_t best = rng_.uniform_index(fitness.size());
        for (int k = 1; k < cfg_.tournament_size; ++k) {
            const std::size_t idx = rng_.uniform_index(fitness.size());
            if (fitness[idx] < fitness[best]) best = idx;
        }
        return best;
    }

    Node random_leaf() {
        Node n;
        if (rng_.bernoulli(0.7)) {
            n.op = Op::feature;
            n.feature = static_cast<int>(rng_.uniform_index(train_.n_features()));
        } else {
            n.op = Op::constant;
            n.value = rng_.uniform(cfg_.constant_min, cfg_.constant_max);
        }
        return n;
    }

    Op random_operator() {
        switch (rng_.uniform_index(4)) {
            case 0: return Op::add;
            case 1: return Op::sub;
            case 2: return Op::mul;
            default: return Op::divide;
        }
    }

    void grow(std::vector<Node>& nodes, int depth_left, bool full) {
        const bool internal = depth_left > 0 && (full || rng_.bernoulli(0.7));
        if (!internal) {
            nodes.push_back(random_leaf());
            return;
        }
        Node n;
        n.op = random_operator();
        nodes.push_back(n);
        grow(nodes, depth_left - 1, full);
        grow(nodes, depth_left - 1, full);
    }

    GpTree random_tree(int depth, bool full) {
        GpTree t;
        grow(t.nodes, depth, full);
        t.refresh_sizes();
        return t;
    }

    std::vector<GpTree> initial_population() {
        std::vector<GpTree> pop = cfg_.initial_population;
        if (static_cast<int>(pop.size()) > cfg_.population_size)
            pop.resize(static_cast<std::size_t>(cfg_.population_size));
        // Ramped half-and-half over depths 2..6 for the remainder.
        int depth = 2;
        bool full = false;
        while (static_cast<int>(pop.size()) < cfg_.population_size) {
            pop.push_back(random_tree(depth, full));
            full = !full;
            if (!full) depth = depth == 6 ? 2 : depth + 1;
        }
        return pop;
    }

    // Biased crossover point: operator nodes preferred when available.
    std::size_t pick_point(const GpTree& t) {
        if (t.size() == 1) return 0;
        if (rng_.bernoulli(0.9)) {
            for (int tries = 0; tries < 8; ++tries) {
                const std::size_t i = rng_.uniform_index(t.nodes.size());
                if (!is_leaf_op(t.nodes[i].op)) return i;
            }
        }
        return rng_.uniform_index(t.nodes.size());
    }

    GpTree crossover(const GpTree& a, const GpTree& b) {
        const std::size_t pa = pick_point(a);
        const std::size_t pb = pick_point(b);
        const auto size_a = static_cast<std::size_t>(a.nodes[pa].subtree_size);
        const auto size_b = static_cast<std::size_t>(b.nodes[pb].subtree_size);
        GpTree child;
        child.nodes.reserve(a.nodes.size() - size_a + size_b);
        child.nodes.insert(child.nodes.end(), a.nodes.begin(),
                           a.nodes.begin() + static_cast<std::ptrdiff_t>(pa));
        child.nodes.insert(child.nodes.end(),
                           b.nodes.begin() + static_cast<std::ptrdiff_t>(pb),
                           b.nodes.begin() + static_cast<std::ptrdiff_t>(pb + size_b));
        child.nodes.insert(child.nodes.end(),
                           a.nodes.begin() + static_cast<std::ptrdiff_t>(pa + size_a),
                           a.nodes.end());
        child.refresh_sizes();
        if (child.depth() > cfg_.max_depth) return a;  // reject oversized offspring
        return child;
    }

    GpTree subtree_mutation(const GpTree& parent) {
        GpTree donor = random_tree(4, false);
        const std::size_t p = pick_point(parent);
        const auto size_p = static_cast<std::size_t>(parent.nodes[p].subtree_size);
        GpTree child;
        child.nodes.insert(child.nodes.end(), parent.nodes.begin(),
                           parent.nodes.begin() + static_cast<std::ptrdiff_t>(p));
        child.nodes.insert(child.nodes.end(), donor.nodes.begin(), donor.nodes.end());
        child.nodes.insert(child.nodes.end(),
                           parent.nodes.begin() + static_cast<std::ptrdiff_t>(p + size_p),
                           parent.nodes.end());
        child.refresh_sizes();
        if (child.depth() > cfg_.max_depth) return parent;
        return child;
    }

    GpTree point_mutation(const GpTree& parent) {
        GpTree child = parent;
        for (auto& n : child.nodes) {
            if (!rng_.bernoulli(0.1)) continue;
            switch (n.op) {
                case Op::feature:
                    n.feature = static_cast<int>(rng_.uniform_index(train_.n_features()));
                    break;
                case Op::constant:
                    n.value += rng_.normal(0.0, 0.1);
                    break;
                default:
                    n.op = random_operator();
                    break;
            }
        }
        return child;
    }

    const Dataset& train_;
    GpConfig cfg_;
    Rng rng_;
};

}  // namespace detail

inline EvolveResult evolve_detailed(const Dataset& train, const GpConfig& config) {
    validate_dataset(train, /*allow_single_class=*/true);
    return detail::Evolver(train, config).run();
}

// Best-fitness tree over all generations (elitist hall of fame).
inline GpTree evolve(const Dataset& train, const GpConfig& config) {
    return evolve_detailed(train, config).best;
}

}  // namespace classlab::gp
