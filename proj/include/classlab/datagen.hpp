#pragma once

// Deterministic synthetic dataset generators.
//
// Two-dimensional families (all clouds are margin-enforced Gaussians, so the
// stated boundary holds exactly on every generated sample):
//   ds1 / mds1 : single linear boundary x1 + x2 = 14. Class 0 below, class 1
//                above. ds1 uses class-dependent scatter, mds1 equal scatter.
//   ds2 / mds2 : ds1 geometry with a 5:1 majority(class 0):minority ratio.
//   ds3 / mds3 : circular boundary of radius 2 around (7,7). Class 1 inside,
//                class 0 in the surrounding annulus; separable by a degree-2
//                boundary but by no single line.
//   ds4        : XOR arrangement rotated 45 degrees. Boundary lines
//                x1 + x2 = 14 and x1 - x2 = 0; class 1 occupies the two
//                opposite quadrants on the rotated diagonals. No single
//                linear split exceeds 75% accuracy.
//
// Pareto families (binary task: Pareto-optimal front sample vs dominated
// sample). Class 1 fixes the auxiliary variables at their optimum; each
// class 0 point copies a class-1 point's position parameters and perturbs a
// random non-empty subset of auxiliary variables by an offset drawn from a
// band bounded away from zero, so it is Pareto-dominated by its partner:
//   mzdt1 / mzdt2   : f1 = x1, f2 = g(1 - sqrt(f1/g)) (zdt1) or
//                     g(1 - (f1/g)^2) (zdt2), g = 1 + 9/(d-1) * sum(aux),
//                     aux optimum 0.
//   mdtlz1 / mdtlz2 : three objectives on the 0.5-sum simplex (dtlz1) or the
//                     unit sphere (dtlz2), aux optimum 0.5,
//                     g = sum((aux - 0.5)^2).
//
// All numeric constants here are mirrored in config/datagen.cfg; a unit test
// keeps the two in sync.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "classlab/dataset.hpp"
#include "classlab/rng.hpp"

namespace classlab::datagen {

enum class Family { ds1, ds2, ds3, ds4, mds1, mds2, mds3, mzdt1, mzdt2, mdtlz1, mdtlz2 };

inline const std::vector<std::pair<std::string, Family>>& family_table() {
    static const std::vector<std::pair<std::string, Family>> table = {
        {"ds1", Family::ds1},       {"ds2", Family::ds2},       {"ds3", Family::ds3},
        {"ds4", Family::ds4},       {"mds1", Family::mds1},     {"mds2", Family::mds2},
        {"mds3", Family::mds3},     {"mzdt1", Family::mzdt1},   {"mzdt2", Family::mzdt2},
        {"mdtlz1", Family::mdtlz1}, {"mdtlz2", Family::mdtlz2}};
    return table;
}

inline std::string family_name(Family f) {
    for (const auto& [name, fam] : family_table())
        if (fam == f) return name;
    return "?";
}

inline Family parse_family(const std::string& name) {
    for (const auto& [n, fam] : family_table())
        if (n == name) return fam;
    throw std::invalid_argument("unknown dataset family: " + name);
}

inline bool is_pareto_family(Family f) {
    return f == Family::mzdt1 || f == Family::mzdt2 || f == Family::mdtlz1 ||
           f == Family::mdtlz2;
}

// Geometry and sampling constants (see config/datagen.cfg).
namespace defaults {
inline constexpr double kDsMargin = 0.3;          // min distance to the boundary
inline constexpr double kLineOffset = 14.0;       // ds1/ds2/ds4: x1 + x2 = offset
inline constexpr double kCircleCenter = 7.0;      // ds3 center (both coords)
inline constexpr double kCircleRadius = 2.0;      // ds3 class-1 radius
inline constexpr double kAnnulusOuter = 5.0;      // ds3 class-0 outer radius
inline constexpr double kXorHalfSpan = 1.4;       // ds4 cloud offset along diagonals
inline constexpr double kParetoBandLow = 0.1;     // min auxiliary perturbation
inline constexpr double kParetoBandZdt = 0.4;     // zdt band width above the minimum
inline constexpr double kParetoBandDtlz = 0.25;   // dtlz band width above the minimum
inline constexpr double kParetoPerturbProb = 0.5; // per-variable perturbation probability
}  // namespace defaults

struct SyntheticSpec {
    Family family = Family::ds1;
    std::size_t n_per_class = 250;  // for ds2/mds2 this is the majority count
    std::size_t d = 2;              // 2 for DS families, >= 3 for Pareto families
    std::uint64_t seed = 0;
    double noise = defaults::kDsMargin;  // DS: margin; Pareto: band minimum

    static SyntheticSpec for_family(Family f, std::size_t n_per_class = 250,
                                    std::size_t d = 0, std::uint64_t seed = 0) {
        SyntheticSpec s;
        s.family = f;
        s.n_per_class = n_per_class;
        s.seed = seed;
        if (is_pareto_family(f)) {
            s.d = d == 0 ? 30 : d;
            s.noise = defaults::kParetoBandLow;
        } else {
            s.d = 2;
            s.noise = defaults::kDsMargin;
        }
        return s;
    }
};

namespace detail {

struct Cloud {
    double cx, cy;    // center
    double sx, sy;    // per-axis standard deviation
};

// Rejection-samples a Gaussian cloud point until `accept` holds.
template <class AcceptFn>
inline std::pair<double, double> sample_cloud(Rng& rng, const Cloud& cloud,
                                              const AcceptFn& accept) {
    for (int tries = 0; tries < 100000; ++tries) {
        const double x = cloud.cx + cloud.sx * rng.normal();
        const double y = cloud.cy + cloud.sy * rng.normal();
        if (accept(x, y)) return {x, y};
    }
    throw std::logic_error("datagen: rejection sampling failed to find a valid point");
}

inline void push_row(std::vector<std::vector<double>>& rows, std::vector<int>& labels,
                     double x, double y, int label) {
    rows.push_back({x, y});
    labels.push_back(label);
}

}  // namespace detail

// Two-dimensional DS / m-DS families.
inline Dataset gen_ds(const SyntheticSpec& spec) {
    using detail::Cloud;
    if (is_pareto_family(spec.family))
        throw std::invalid_argument("gen_ds: " + family_name(spec.family) +
                                    " is not a 2-D family");
    if (spec.d != 2) throw std::invalid_argument("gen_ds: DS families require d = 2");
    if (spec.n_per_class < 2)
        throw std::invalid_argument("gen_ds: need at least 2 samples per class");

    Rng rng = Rng::stream(spec.seed, 0xD5 + static_cast<std::uint64_t>(spec.family));
    const double margin = spec.noise;
    const double off = defaults::kLineOffset;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;

    const bool modified = spec.family == Family::mds1 || spec.family == Family::mds2 ||
                          spec.family == Family::mds3;

    switch (spec.family) {
        case Family::ds1:
        case Family::ds2:
        case Family::mds1:
        case Family::mds2: {
            const bool biased = spec.family == Family::ds2 || spec.family == Family::mds2;
            const std::size_t n0 = spec.n_per_class;
            const std::size_t n1 = biased ? std::max<std::size_t>(1, spec.n_per_class / 5)
                                          : spec.n_per_class;
            // Clouds are sampled in the rotated frame (u perpendicular to the
            // boundary, v along it) and elongated along the line, so each
            // single-feature marginal overlaps heavily while the diagonal
            // direction separates with the enforced margin.
            struct RotCloud {
                double cu, su, sv;
            };
            const RotCloud c0 = modified ? RotCloud{-2.0, 0.9, 2.15} : RotCloud{-2.0, 1.0, 2.3};
            const RotCloud c1 = modified ? RotCloud{2.0, 0.9, 2.15} : RotCloud{2.0, 0.8, 2.0};
            auto sample_rot = [&](const RotCloud& cloud, double side) {
                for (int tries = 0; tries < 100000; ++tries) {
                    const double u = cloud.cu + cloud.su * rng.normal();
                    const double v = cloud.sv * rng.normal();
                    if (side * u < margin) continue;
                    const double x = 7.0 + (u + v) * inv_sqrt2;
                    const double y = 7.0 + (u - v) * inv_sqrt2;
                    return std::pair<double, double>{x, y};
                }
                throw std::logic_error("datagen: rejection sampling failed");
            };
            for (std::size_t i = 0; i < n0; ++i) {
                auto [x, y] = sample_rot(c0, -1.0);
                detail::push_row(rows, labels, x, y, 0);
            }
            for (std::size_t i = 0; i < n1; ++i) {
                auto [x, y] = sample_rot(c1, +1.0);
                detail::push_row(rows, labels, x, y, 1);
            }
            break;
        }
        case Family::ds3:
        case Family::mds3: {
            const double cx = defaults::kCircleCenter, cy = defaults::kCircleCenter;
            const double r_in = defaults::kCircleRadius - margin;   // class-1 disk
            const double r_lo = defaults::kCircleRadius + margin;   // class-0 annulus
            const double r_hi = defaults::kAnnulusOuter;
            // class 1 inside the circle
            for (std::size_t i = 0; i < spec.n_per_class; ++i) {
                double r;
                if (modified) {
                    r = r_in * std::sqrt(rng.uniform());  // uniform by area
                } else {
                    do {
                        r = std::fabs(rng.normal(0.0, 0.85));
                    } while (r >= r_in);
                }
                const double a = rng.uniform(0.0, 2.0 * 3.141592653589793);
                detail::push_row(rows, labels, cx + r * std::cos(a), cy + r * std::sin(a), 1);
            }
            // class 0 in the annulus
            for (std::size_t i = 0; i < spec.n_per_class; ++i) {
                const double u = rng.uniform();
                const double r = std::sqrt(r_lo * r_lo + u * (r_hi * r_hi - r_lo * r_lo));
                const double a = rng.uniform(0.0, 2.0 * 3.141592653589793);
                detail::push_row(rows, labels, cx + r * std::cos(a), cy + r * std::sin(a), 0);
            }
            break;
        }
        case Family::ds4: {
            // Rotated XOR: u = (x1 + x2 - 14)/sqrt(2), v = (x1 - x2)/sqrt(2).
            // Class 1 where u and v share a sign, class 0 otherwise. Clouds
            // are sampled in the (u, v) frame and elongated along u, which is
            // diagonal in feature space, so no axis-parallel or single linear
            // split works well.
            const double h = defaults::kXorHalfSpan;
            const double m0 = 2.0 * h * inv_sqrt2;  // |u|,|v| of cloud centers
            struct QuadCloud {
                double cu, cv, su, sv;
            };
            const QuadCloud q1[2] = {{m0, m0, 2.6, 0.7}, {-m0, -m0, 2.6, 0.7}};
            const QuadCloud q0[2] = {{m0, -m0, 2.2, 0.9}, {-m0, m0, 2.2, 0.9}};
            auto sample_quad = [&](const QuadCloud& cloud, bool same_sign) {
                for (int tries = 0; tries < 100000; ++tries) {
                    const double u = cloud.cu + cloud.su * rng.normal();
                    const double v = cloud.cv + cloud.sv * rng.normal();
                    if (std::fabs(u) < margin || std::fabs(v) < margin) continue;
                    if ((u * v > 0.0) != same_sign) continue;
                    const double x = 7.0 + (u + v) * inv_sqrt2;
                    const double y = 7.0 + (u - v) * inv_sqrt2;
                    return std::pair<double, double>{x, y};
                }
                throw std::logic_error("datagen: rejection sampling failed");
            };
            for (std::size_t i = 0; i < spec.n_per_class; ++i) {
                auto [x, y] = sample_quad(q1[i % 2], true);
                detail::push_row(rows, labels, x, y, 1);
            }
            for (std::size_t i = 0; i < spec.n_per_class; ++i) {
                auto [x, y] = sample_quad(q0[i % 2], false);
                detail::push_row(rows, labels, x, y, 0);
            }
            break;
        }
        default:
            throw std::invalid_argument("gen_ds: unknown family");
    }

    Dataset ds;
    ds.features = Matrix::from_rows(rows);
    ds.labels = std::move(labels);
    ds.feature_names = {"x1", "x2"};
    ds.name = family_name(spec.family);
    validate_dataset(ds);
    return ds;
}

// Objective vectors for the Pareto families; used by generators and tests.
inline std::vector<double> pareto_objectives(Family family, std::span<const double> x) {
    const std::size_t d = x.size();
    switch (family) {
        case Family::mzdt1:
        case Family::mzdt2: {
            double aux = 0.0;
            for (std::size_t j = 1; j < d; ++j) aux += x[j];
            const double g = 1.0 + 9.0 / static_cast<double>(d - 1) * aux;
            const double f1 = x[0];
            const double f2 = family == Family::mzdt1
                                  ? g * (1.0 - std::sqrt(f1 / g))
                                  : g * (1.0 - (f1 / g) * (f1 / g));
            return {f1, f2};
        }
        case Family::mdtlz1:
        case Family::mdtlz2: {
            double g = 0.0;
            for (std::size_t j = 2; j < d; ++j) g += (x[j] - 0.5) * (x[j] - 0.5);
            const double s = 1.0 + g;
            if (family == Family::mdtlz1) {
                return {0.5 * s * x[0] * x[1], 0.5 * s * x[0] * (1.0 - x[1]),
                        0.5 * s * (1.0 - x[0])};
            }
            const double half_pi = 1.5707963267948966;
            const double c1 = std::cos(x[0] * half_pi), s1 = std::sin(x[0] * half_pi);
            const double c2 = std::cos(x[1] * half_pi), s2 = std::sin(x[1] * half_pi);
            return {s * c1 * c2, s * c1 * s2, s * s1};
        }
        default:
            throw std::invalid_argument("pareto_objectives: not a Pareto family");
    }
}

// Pareto-front vs dominated samples. Class 1 sits on the front; each class-0
// row copies a class-1 partner's position variables and perturbs a random
// non-empty subset of auxiliary variables, which guarantees it is dominated.
inline Dataset gen_pareto(const SyntheticSpec& spec) {
    if (!is_pareto_family(spec.family))
        throw std::invalid_argument("gen_pareto: " + family_name(spec.family) +
                                    " is not a Pareto family");
    if (spec.d < 3) throw std::invalid_argument("gen_pareto: need d >= 3");
    if (spec.n_per_class < 2)
        throw std::invalid_argument("gen_pareto: need at least 2 samples per class");

    Rng rng = Rng::stream(spec.seed, 0xFA + static_cast<std::uint64_t>(spec.family));
    const std::size_t d = spec.d;
    const bool dtlz = spec.family == Family::mdtlz1 || spec.family == Family::mdtlz2;
    const std::size_t n_position = dtlz ? 2 : 1;
    const double aux_opt = dtlz ? 0.5 : 0.0;
    const double band_lo = std::max(spec.noise, defaults::kParetoBandLow);
    const double band_hi =
        band_lo + (dtlz ? defaults::kParetoBandDtlz : defaults::kParetoBandZdt);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::vector<double>> front;

    for (std::size_t i = 0; i < spec.n_per_class; ++i) {
        std::vector<double> x(d, aux_opt);
        for (std::size_t j = 0; j < n_position; ++j) x[j] = rng.uniform();
        front.push_back(x);
        rows.push_back(std::move(x));
        labels.push_back(1);
    }
    for (std::size_t i = 0; i < spec.n_per_class; ++i) {
        std::vector<double> x = front[i];  // partner keeps position variables equal
        bool any = false;
        for (std::size_t j = n_position; j < d; ++j) {
            if (rng.bernoulli(defaults::kParetoPerturbProb)) {
                const double delta = rng.uniform(band_lo, band_hi);
                x[j] = dtlz ? aux_opt + (rng.bernoulli(0.5) ? delta : -delta)
                            : aux_opt + delta;
                any = true;
            }
        }
        if (!any) {
            const std::size_t j = n_position + rng.uniform_index(d - n_position);
            const double delta = rng.uniform(band_lo, band_hi);
            x[j] = dtlz ? aux_opt + (rng.bernoulli(0.5) ? delta : -delta) : aux_opt + delta;
        }
        rows.push_back(std::move(x));
        labels.push_back(0);
    }

    Dataset ds;
    ds.features = Matrix::from_rows(rows);
    ds.labels = std::move(labels);
    ds.feature_names.reserve(d);
    for (std::size_t j = 0; j < d; ++j) ds.feature_names.push_back("x" + std::to_string(j + 1));
    ds.name = family_name(spec.family) + "_d" + std::to_string(d);
    validate_dataset(ds);
    return ds;
}

inline Dataset generate(const SyntheticSpec& spec) {
    return is_pareto_family(spec.family) ? gen_pareto(spec) : gen_ds(spec);
}

}  // namespace classlab::datagen
