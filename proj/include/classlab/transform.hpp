#pragma once

// Per-feature affine rescaling. Fit on training data only, then reused
// verbatim on test data. Inverting after applying recovers raw values.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "classlab/dataset.hpp"
#include "classlab/matrix.hpp"

namespace classlab {

class FeatureTransform {
public:
    FeatureTransform() = default;

    // Maps each feature's observed [min, max] on `train` onto [lo, hi].
    // A constant feature keeps unit slope and is shifted to the interval
    // midpoint so the transform stays invertible.
    static FeatureTransform fit(const Dataset& train, double lo, double hi) {
        if (hi <= lo) throw std::invalid_argument("FeatureTransform: need lo < hi");
        FeatureTransform t;
        t.lo_ = lo;
        t.hi_ = hi;
        const std::size_t d = train.n_features();
        t.scale_.assign(d, 1.0);
        t.offset_.assign(d, 0.0);
        for (std::size_t c = 0; c < d; ++c) {
            double mn = train.features(0, c), mx = mn;
            for (std::size_t r = 1; r < train.n_rows(); ++r) {
                mn = std::min(mn, train.features(r, c));
                mx = std::max(mx, train.features(r, c));
            }
            if (mx - mn < 1e-12) {
                t.scale_[c] = 1.0;
                t.offset_[c] = 0.5 * (lo + hi) - mn;
            } else {
                t.scale_[c] = (hi - lo) / (mx - mn);
                t.offset_[c] = lo - t.scale_[c] * mn;
            }
        }
        return t;
    }

    bool fitted() const { return !scale_.empty(); }
    std::size_t n_features() const { return scale_.size(); }
    double low() const { return lo_; }
    double high() const { return hi_; }

    double apply_one(std::size_t feature, double x) const {
        return scale_[feature] * x + offset_[feature];
    }
    double invert_one(std::size_t feature, double y) const {
        return (y - offset_[feature]) / scale_[feature];
    }

    std::vector<double> apply(std::span<const double> x) const {
        check_dim(x.size());
        std::vector<double> out(x.size());
        for (std::size_t c = 0; c < x.size(); ++c) out[c] = apply_one(c, x[c]);
        return out;
    }

    std::vector<double> invert(std::span<const double> y) const {
        check_dim(y.size());
        std::vector<double> out(y.size());
        for (std::size_t c = 0; c < y.size(); ++c) out[c] = invert_one(c, y[c]);
        return out;
    }

    Matrix apply_matrix(const Matrix& m) const {
        check_dim(m.cols());
        Matrix out(m.rows(), m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = apply_one(c, m(r, c));
        return out;
    }

    nlohmann::json to_json() const {
        return {{"lo", lo_}, {"hi", hi_}, {"scale", scale_}, {"offset", offset_}};
    }

    static FeatureTransform from_json(const nlohmann::json& j) {
        FeatureTransform t;
        t.lo_ = j.at("lo").get<double>();
        t.hi_ = j.at("hi").get<double>();
        t.scale_ = j.at("scale").get<std::vector<double>>();
        t.offset_ = j.at("offset").get<std::vector<double>>();
        return t;
    }

private:
    void check_dim(std::size_t n) const {
        if (n != scale_.size())
            throw std::invalid_argument("FeatureTransform: dimension mismatch");
    }

    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> scale_;
    std::vector<double> offset_;
};

}  // namespace classlab
