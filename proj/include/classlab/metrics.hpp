#pragma once

// Prediction metrics and the per-run evaluation record shared by all
// classifier families.

#include <functional>
#include <span>
#include <string>

#include "classlab/dataset.hpp"

namespace classlab {

enum class Method { cart, svm, gp, nldt };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::cart: return "cart";
        case Method::svm: return "svm";
        case Method::gp: return "gp";
        case Method::nldt: return "nldt";
    }
    return "?";
}

using Predictor = std::function<int(std::span<const double>)>;

// Fraction of rows classified correctly.
inline double evaluate(const Predictor& predict, const Dataset& ds) {
    std::size_t correct = 0;
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        if (predict(ds.features.row(r)) == ds.labels[r]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(ds.n_rows());
}

// One train+evaluate outcome. `complexity` follows the method-specific
// definition: node count (cart), support-vector count (svm), internal-node
// count (gp), total variables over all rules (nldt).
struct EvalReport {
    double accuracy_train = 0.0;
    double accuracy_test = 0.0;
    double complexity = 0.0;
    double fit_wall_time = 0.0;  // seconds
    Method method_tag = Method::cart;
};

}  // namespace classlab
