#pragma once

// Axis-parallel decision trees grown by recursive binary splitting on Gini
// impurity. A row goes left iff x[feature] <= threshold. Split search is an
// exhaustive scan over all features and all midpoints between consecutive
// distinct sorted values, ties broken by lower feature index then lower
// threshold.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "classlab/dataset.hpp"

namespace classlab::cart {

using ClassCounts = std::array<std::int64_t, 2>;

struct Params {
    int max_depth = 20;
    int min_leaf = 1;
    double min_impurity_decrease = 1e-7;
};

// Gini impurity for a two-class node: 1 - sum_i (N_i/N)^2.
inline double gini(const ClassCounts& counts) {
    const double n = static_cast<double>(counts[0] + counts[1]);
    if (n < 1) throw std::invalid_argument("gini: empty node");
    const double p0 = static_cast<double>(counts[0]) / n;
    const double p1 = static_cast<double>(counts[1]) / n;
    return 1.0 - (p0 * p0 + p1 * p1);
}

// Child-size-weighted sum of child impurities.
inline double split_quality(const ClassCounts& left, const ClassCounts& right) {
    const double nl = static_cast<double>(left[0] + left[1]);
    const double nr = static_cast<double>(right[0] + right[1]);
    if (nl < 1 || nr < 1) throw std::invalid_argument("split_quality: empty child");
    const double np = nl + nr;
    return (nl / np) * gini(left) + (nr / np) * gini(right);
}

struct SplitCandidate {
    std::size_t feature = 0;
    double threshold = 0.0;
    double quality = 0.0;  // S value of the split
};

// Exhaustive best split over the given rows, or nullopt when no candidate
// reduces impurity by at least min_impurity_decrease (or no midpoint exists).
inline std::optional<SplitCandidate> best_split(const Matrix& features,
                                                const std::vector<int>& labels,
                                                std::span<const std::size_t> rows,
                                                const Params& params = {}) {
    ClassCounts parent = {0, 0};
    for (auto r : rows) parent[static_cast<std::size_t>(labels[r])]++;
    const double parent_gini = gini(parent);

    std::optional<SplitCandidate> best;
    std::vector<std::pair<double, int>> column(rows.size());
    for (std::size_t f = 0; f < features.cols(); ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            column[i] = {features(rows[i], f), labels[rows[i]]};
        std::sort(column.begin(), column.end());

        ClassCounts left = {0, 0};
        ClassCounts right = parent;
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            left[static_cast<std::size_t>(column[i].second)]++;
            right[static_cast<std::size_t>(column[i].second)]--;
            if (column[i].first == column[i + 1].first) continue;  // no midpoint here
            const auto n_left = static_cast<std::int64_t>(i + 1);
            const auto n_right = static_cast<std::int64_t>(column.size() - i - 1);
            if (n_left < params.min_leaf || n_right < params.min_leaf) continue;
            const double s = split_quality(left, right);
            if (parent_gini - s < params.min_impurity_decrease) continue;
            if (!best || s < best->quality) {
                best = SplitCandidate{f, 0.5 * (column[i].first + column[i + 1].first), s};
            }
        }
    }
    return best;
}

struct Node {
    bool is_leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;       // majority class (ties -> 0), kept for internals too
    ClassCounts counts = {0, 0};
};

class AxisTree {
public:
    std::vector<Node> nodes;  // root at index 0
    Params params;

    int predict(std::span<const double> x) const {
        std::size_t idx = 0;
        while (!nodes[idx].is_leaf) {
            const Node& n = nodes[idx];
            idx = static_cast<std::size_t>(x[n.feature] <= n.threshold ? n.left : n.right);
        }
        return nodes[idx].label;
    }

    int depth() const { return depth_below(0); }

    nlohmann::json to_json() const {
        nlohmann::json jnodes = nlohmann::json::array();
        for (const auto& n : nodes) {
            nlohmann::json jn;
            jn["leaf"] = n.is_leaf;
            jn["counts"] = n.counts;
            jn["label"] = n.label;
            if (!n.is_leaf) {
                jn["feature"] = n.feature;
                jn["threshold"] = n.threshold;
                jn["left"] = n.left;
                jn["right"] = n.right;
            }
            jnodes.push_back(jn);
        }
        return {{"method", "cart"},
                {"params",
                 {{"max_depth", params.max_depth},
                  {"min_leaf", params.min_leaf},
                  {"min_impurity_decrease", params.min_impurity_decrease}}},
                {"nodes", jnodes}};
    }

    static AxisTree from_json(const nlohmann::json& j) {
        AxisTree tree;
        tree.params.max_depth = j.at("params").at("max_depth").get<int>();
        tree.params.min_leaf = j.at("params").at("min_leaf").get<int>();
        tree.params.min_impurity_decrease =
            j.at("params").at("min_impurity_decrease").get<double>();
        for (const auto& jn : j.at("nodes")) {
            Node n;
            n.is_leaf = jn.at("leaf").get<bool>();
            n.counts = jn.at("counts").get<ClassCounts>();
            n.label = jn.at("label").get<int>();
            if (!n.is_leaf) {
                n.feature = jn.at("feature").get<std::size_t>();
                n.threshold = jn.at("threshold").get<double>();
                n.left = jn.at("left").get<int>();
                n.right = jn.at("right").get<int>();
            }
            tree.nodes.push_back(n);
        }
        return tree;
    }

    // Indented "x_i <= tau" rule listing.
    std::string dump_rules(const std::vector<std::string>& feature_names = {}) const {
        std::ostringstream out;
        dump_node(out, 0, 0, feature_names);
        return out.str();
    }

private:
    int depth_below(std::size_t idx) const {
        const Node& n = nodes[idx];
        if (n.is_leaf) return 0;
        return 1 + std::max(depth_below(static_cast<std::size_t>(n.left)),
                            depth_below(static_cast<std::size_t>(n.right)));
    }

    void dump_node(std::ostringstream& out, std::size_t idx, int indent,
                   const std::vector<std::string>& names) const {
        const Node& n = nodes[idx];
        const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
        if (n.is_leaf) {
            out << pad << "class " << n.label << "  (" << n.counts[0] << "/" << n.counts[1]
                << ")\n";
            return;
        }
        const std::string fname =
            n.feature < names.size() ? names[n.feature] : "x" + std::to_string(n.feature + 1);
        out << pad << "if " << fname << " <= " << n.threshold << ":\n";
        dump_node(out, static_cast<std::size_t>(n.left), indent + 1, names);
        out << pad << "else:\n";
        dump_node(out, static_cast<std::size_t>(n.right), indent + 1, names);
    }
};

namespace detail {

inline int majority_label(const ClassCounts& counts) {
    return counts[1] > counts[0] ? 1 : 0;  // ties -> class 0
}

inline int build_node(AxisTree& tree, const Matrix& features, const std::vector<int>& labels,
                      std::vector<std::size_t>& rows, int depth) {
    Node node;
    for (auto r : rows) node.counts[static_cast<std::size_t>(labels[r])]++;
    node.label = majority_label(node.counts);
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);

    const auto& params = tree.params;
    const bool pure = node.counts[0] == 0 || node.counts[1] == 0;
    if (pure || depth >= params.max_depth ||
        rows.size() < 2 * static_cast<std::size_t>(params.min_leaf))
        return index;

    const auto cand = best_split(features, labels, rows, params);
    if (!cand) return index;

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
        (features(r, cand->feature) <= cand->threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[static_cast<std::size_t>(index)].is_leaf = false;
    tree.nodes[static_cast<std::size_t>(index)].feature = cand->feature;
    tree.nodes[static_cast<std::size_t>(index)].threshold = cand->threshold;
    const int left = build_node(tree, features, labels, left_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    const int right = build_node(tree, features, labels, right_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
}

}  // namespace detail

inline AxisTree fit_cart(const Dataset& train, const Params& params = {}) {
    validate_dataset(train, /*allow_single_class=*/true);
    AxisTree tree;
    tree.params = params;
    std::vector<std::size_t> rows(train.n_rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    detail::build_node(tree, train.features, train.labels, rows, 0);
    return tree;
}

// Complexity: total node count (internal + leaf).
inline int cart_complexity(const AxisTree& tree) {
    return static_cast<int>(tree.nodes.size());
}

}  // namespace classlab::cart
