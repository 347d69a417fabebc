#pragma once

// Soft-margin SVM with RBF kernel, trained by pairwise dual coordinate
// ascent (SMO-style). Two multipliers are updated jointly with the
// closed-form subproblem solution, which keeps the equality constraint
// sum(a_i t_i) = 0 exact at every iterate. Labels are mapped 0 -> -1,
// 1 -> +1 at this module's boundary only.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "classlab/dataset.hpp"
#include "classlab/rng.hpp"

namespace classlab::svm {

inline double rbf_kernel(std::span<const double> p, std::span<const double> q, double gamma) {
    if (p.size() != q.size())
        throw std::invalid_argument("rbf_kernel: dimension mismatch");
    if (!(gamma > 0.0)) throw std::invalid_argument("rbf_kernel: gamma must be positive");
    double dist2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double diff = p[i] - q[i];
        dist2 += diff * diff;
    }
    return std::exp(-gamma * dist2);
}

// 1 / (d * variance of all feature entries); the scale-aware default used
// when no explicit gamma is given.
inline double auto_gamma(const Matrix& features) {
    const auto& data = features.data();
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(data.size());
    double var = 0.0;
    for (double v : data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(data.size());
    if (var < 1e-12) var = 1.0;
    return 1.0 / (static_cast<double>(features.cols()) * var);
}

struct SvmParams {
    double c = 1000.0;
    double gamma = 0.0;  // <= 0 selects auto_gamma
    double kkt_tol = 1e-3;
    double sv_epsilon = 1e-8;
    int max_passes = 100;  // cap on optimization sweeps
    std::uint64_t seed = 0;
    bool record_objective = false;  // keep a per-accepted-update objective trace
};

struct SupportVector {
    std::vector<double> x;
    int t = 1;  // label in {-1, +1}
    double alpha = 0.0;
};

struct SvmModel {
    std::vector<SupportVector> support_vectors;  // rows with alpha > sv_epsilon
    std::vector<double> alphas;                  // all training multipliers
    double bias = 0.0;
    double gamma = 1.0;
    double c = 1.0;
    double sv_epsilon = 1e-8;
    bool converged = false;
    std::vector<double> objective_trace;

    nlohmann::json to_json() const {
        nlohmann::json jsv = nlohmann::json::array();
        for (const auto& sv : support_vectors)
            jsv.push_back({{"x", sv.x}, {"t", sv.t}, {"alpha", sv.alpha}});
        return {{"method", "svm"},   {"c", c},           {"gamma", gamma},
                {"bias", bias},      {"converged", converged},
                {"support_vectors", jsv}};
    }

    static SvmModel from_json(const nlohmann::json& j) {
        SvmModel m;
        m.c = j.at("c").get<double>();
        m.gamma = j.at("gamma").get<double>();
        m.bias = j.at("bias").get<double>();
        m.converged = j.value("converged", true);
        for (const auto& jsv : j.at("support_vectors")) {
            SupportVector sv;
            sv.x = jsv.at("x").get<std::vector<double>>();
            sv.t = jsv.at("t").get<int>();
            sv.alpha = jsv.at("alpha").get<double>();
            m.support_vectors.push_back(std::move(sv));
        }
        return m;
    }
};

// y(x) = sum_i a_i t_i k(x, x_i) + b over retained support vectors.
inline double decision_value(const SvmModel& model, std::span<const double> x) {
    double y = model.bias;
    for (const auto& sv : model.support_vectors)
        y += sv.alpha * sv.t * rbf_kernel(x, sv.x, model.gamma);
    return y;
}

inline int predict(const SvmModel& model, std::span<const double> x) {
    return decision_value(model, x) > 0.0 ? 1 : 0;
}

// Complexity: number of support vectors (rows with alpha > sv_epsilon).
inline int svm_complexity(const SvmModel& model) {
    return static_cast<int>(model.support_vectors.size());
}

// Dual objective of the kernel soft-margin problem evaluated at the model's
// multipliers: sum(a) - 1/2 sum_ij a_i a_j t_i t_j k(x_i, x_j).
inline double dual_objective(const SvmModel& model) {
    double linear = 0.0, quad = 0.0;
    const auto& svs = model.support_vectors;
    for (std::size_t i = 0; i < svs.size(); ++i) {
        linear += svs[i].alpha;
        for (std::size_t j = 0; j < svs.size(); ++j) {
            quad += svs[i].alpha * svs[j].alpha * svs[i].t * svs[j].t *
                    rbf_kernel(svs[i].x, svs[j].x, model.gamma);
        }
    }
    return linear - 0.5 * quad;
}

namespace detail {

class SmoSolver {
public:
    SmoSolver(const Matrix& x, const std::vector<int>& labels01, const SvmParams& params)
        : x_(x),
          n_(x.rows()),
          c_(params.c),
          tol_(params.kkt_tol),
          rng_(Rng::stream(params.seed, 0x57A7)),
          record_(params.record_objective) {
        gamma_ = params.gamma > 0.0 ? params.gamma : auto_gamma(x);
        t_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) t_[i] = labels01[i] == 1 ? 1 : -1;
        alpha_.assign(n_, 0.0);
        error_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -static_cast<double>(t_[i]);
        cache_full_ = n_ <= 3000;
        if (cache_full_) {
            gram_.assign(n_ * n_, 0.0);
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::size_t j = i; j < n_; ++j) {
                    const double k = rbf_kernel(x_.row(i), x_.row(j), gamma_);
                    gram_[i * n_ + j] = k;
                    gram_[j * n_ + i] = k;
                }
            }
        }
    }

    bool run(int max_passes) {
        int passes = 0;
        bool examine_all = true;
        while (passes < max_passes) {
            std::size_t num_changed = 0;
            if (examine_all) {
                refresh_errors();  // drop incremental drift before a full sweep
                for (std::size_t i = 0; i < n_; ++i) num_changed += examine(i);
                if (num_changed == 0) return true;  // clean full sweep: converged
                examine_all = false;
            } else {
                for (std::size_t i = 0; i < n_; ++i)
                    if (alpha_[i] > 0.0 && alpha_[i] < c_) num_changed += examine(i);
                if (num_changed == 0) examine_all = true;
            }
            ++passes;
        }
        return false;
    }

    double gamma() const { return gamma_; }

    // Final bias minimizing the worst KKT violation. Each row demands
    // b >= target (margin must not fall short), b <= target (margin must not
    // exceed 1), or b == target (free support vector); the minimax choice is
    // the midpoint of the tightest lower/upper requirements, with free rows
    // contributing to both sides. The incrementally tracked b_ steers the
    // optimization but is not necessarily the best final value.
    double bias() const {
        const double bound_eps = 1e-8 * std::max(1.0, c_);
        double lo = -1e300, hi = 1e300;
        for (std::size_t i = 0; i < n_; ++i) {
            double f = 0.0;  // decision value without bias
            for (std::size_t j = 0; j < n_; ++j) {
                if (alpha_[j] == 0.0) continue;
                f += alpha_[j] * t_[j] * kernel(i, j);
            }
            const double target = static_cast<double>(t_[i]) - f;
            const bool at_lower = alpha_[i] <= bound_eps;
            const bool at_upper = alpha_[i] >= c_ - bound_eps;
            const bool needs_floor = (at_lower && t_[i] > 0) || (at_upper && t_[i] < 0);
            const bool needs_ceiling = (at_lower && t_[i] < 0) || (at_upper && t_[i] > 0);
            if (needs_floor || (!at_lower && !at_upper)) lo = std::max(lo, target);
            if (needs_ceiling || (!at_lower && !at_upper)) hi = std::min(hi, target);
        }
        // Both sides are populated: the equality constraint guarantees active
        // rows of each orientation.
        return 0.5 * (lo + hi);
    }
    const std::vector<double>& alphas() const { return alpha_; }
    const std::vector<int>& targets() const { return t_; }
    const std::vector<double>& trace() const { return trace_; }

private:
    double kernel(std::size_t i, std::size_t j) const {
        if (cache_full_) return gram_[i * n_ + j];
        return rbf_kernel(x_.row(i), x_.row(j), gamma_);
    }

    void refresh_errors() {
        for (std::size_t i = 0; i < n_; ++i) {
            double f = b_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (alpha_[j] == 0.0) continue;
                f += alpha_[j] * t_[j] * kernel(i, j);
            }
            error_[i] = f - static_cast<double>(t_[i]);
        }
    }

    double objective() const {
        double linear = 0.0, quad = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0.0) continue;
            linear += alpha_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                if (alpha_[j] == 0.0) continue;
                quad += alpha_[i] * alpha_[j] * t_[i] * t_[j] * kernel(i, j);
            }
        }
        return linear - 0.5 * quad;
    }

    std::size_t examine(std::size_t i2) {
        const double a2 = alpha_[i2];
        const double e2 = error_[i2];
        const double r2 = e2 * t_[i2];
        const bool violates = (r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0.0);
        if (!violates) return 0;

        // Second-choice heuristic: largest |E1 - E2| among non-bound points.
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] <= 0.0 || alpha_[i] >= c_) continue;
            const double gap = std::fabs(error_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;

        const std::size_t start = rng_.uniform_index(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start + k) % n_;
            if (alpha_[i1] > 0.0 && alpha_[i1] < c_ && take_step(i1, i2)) return 1;
        }
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start + k) % n_;
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1 = alpha_[i1], a2 = alpha_[i2];
        const int t1 = t_[i1], t2 = t_[i2];
        const double e1 = error_[i1], e2 = error_[i2];
        const double s = t1 * t2;

        double lo, hi;
        if (t1 != t2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c_, c_ + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c_);
            hi = std::min(c_, a1 + a2);
        }
        if (lo >= hi) return false;

        const double k11 = kernel(i1, i1), k12 = kernel(i1, i2), k22 = kernel(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;
        if (eta <= 0.0) return false;  // duplicate points; no usable curvature

        double a2_new = a2 + t2 * (e1 - e2) / eta;
        a2_new = std::min(hi, std::max(lo, a2_new));
        if (std::fabs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
        const double a1_new = a1 + s * (a2 - a2_new);

        const double d1 = t1 * (a1_new - a1);
        const double d2 = t2 * (a2_new - a2);
        const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        double b_new;
        if (a1_new > 0.0 && a1_new < c_) {
            b_new = b1;
        } else if (a2_new > 0.0 && a2_new < c_) {
            b_new = b2;
        } else {
            b_new = 0.5 * (b1 + b2);
        }
        const double db = b_new - b_;

        for (std::size_t i = 0; i < n_; ++i)
            error_[i] += d1 * kernel(i1, i) + d2 * kernel(i2, i) + db;
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        b_ = b_new;
        if (record_) trace_.push_back(objective());
        return true;
    }

    const Matrix& x_;
    std::size_t n_;
    double c_;
    double tol_;
    double gamma_ = 1.0;
    Rng rng_;
    bool record_ = false;
    bool cache_full_ = false;
    std::vector<double> gram_;
    std::vector<int> t_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    double b_ = 0.0;
    std::vector<double> trace_;
};

}  // namespace detail

inline SvmModel solve_dual(const Dataset& train, const SvmParams& params = {}) {
    if (!(params.c > 0.0)) throw std::invalid_argument("solve_dual: C must be positive");
    validate_dataset(train);  // requires both classes

    detail::SmoSolver solver(train.features, train.labels, params);
    const bool converged = solver.run(params.max_passes);

    SvmModel model;
    model.c = params.c;
    model.gamma = solver.gamma();
    model.bias = solver.bias();
    model.sv_epsilon = params.sv_epsilon;
    model.converged = converged;
    model.alphas = solver.alphas();
    model.objective_trace = solver.trace();
    for (std::size_t i = 0; i < train.n_rows(); ++i) {
        if (model.alphas[i] > params.sv_epsilon) {
            SupportVector sv;
            const auto row = train.features.row(i);
            sv.x.assign(row.begin(), row.end());
            sv.t = solver.targets()[i];
            sv.alpha = model.alphas[i];
            model.support_vectors.push_back(std::move(sv));
        }
    }
    return model;
}

// Maximum KKT violation of the model on its training set; used by tests and
// the post-fit audit. Returns max over rows of the appropriate one-sided
// margin defect.
inline double max_kkt_violation(const SvmModel& model, const Dataset& train) {
    const double bound_eps = 1e-8 * std::max(1.0, model.c);
    double worst = 0.0;
    for (std::size_t i = 0; i < train.n_rows(); ++i) {
        const double a = model.alphas[i];
        const int t = train.labels[i] == 1 ? 1 : -1;
        const double margin = t * decision_value(model, train.features.row(i));
        double violation = 0.0;
        if (a <= bound_eps) {
            violation = std::max(0.0, 1.0 - margin);
        } else if (a >= model.c - bound_eps) {
            violation = std::max(0.0, margin - 1.0);
        } else {
            violation = std::fabs(margin - 1.0);
        }
        worst = std::max(worst, violation);
    }
    return worst;
}

}  // namespace classlab::svm
