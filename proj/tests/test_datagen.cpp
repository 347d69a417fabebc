#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>

#include "classlab/datagen.hpp"
#include "oracles/linear_oracle.hpp"

using namespace classlab;
using datagen::Family;
using datagen::SyntheticSpec;

TEST(Datagen, Deterministic) {
    for (const Family f : {Family::ds1, Family::ds4, Family::mzdt1, Family::mdtlz2}) {
        const auto spec = SyntheticSpec::for_family(f, 50, 0, 99);
        const Dataset a = datagen::generate(spec);
        const Dataset b = datagen::generate(spec);
        ASSERT_EQ(a.n_rows(), b.n_rows());
        for (std::size_t r = 0; r < a.n_rows(); ++r) {
            EXPECT_EQ(a.labels[r], b.labels[r]);
            for (std::size_t c = 0; c < a.n_features(); ++c)
                EXPECT_DOUBLE_EQ(a.features(r, c), b.features(r, c));
        }
        const Dataset c = datagen::generate(
            SyntheticSpec::for_family(f, 50, 0, 100));
        bool differs = false;
        for (std::size_t r = 0; r < a.n_rows() && !differs; ++r)
            differs = a.features(r, 0) != c.features(r, 0);
        EXPECT_TRUE(differs);
    }
}

TEST(Datagen, Ds1SeparableByConstructionLine) {
    const Dataset ds = datagen::generate(SyntheticSpec::for_family(Family::ds1, 250, 0, 7));
    ASSERT_EQ(ds.n_rows(), 500u);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const double signed_dist =
            (ds.features(r, 0) + ds.features(r, 1) - datagen::defaults::kLineOffset) *
            inv_sqrt2;
        if (ds.labels[r] == 0) {
            EXPECT_LE(signed_dist, -datagen::defaults::kDsMargin + 1e-12);
        } else {
            EXPECT_GE(signed_dist, datagen::defaults::kDsMargin - 1e-12);
        }
    }
    EXPECT_TRUE(oracle::perceptron_separable(oracle::rows_of(ds), ds.labels));
}

TEST(Datagen, Ds2FiveToOneRatio) {
    const Dataset ds = datagen::generate(SyntheticSpec::for_family(Family::ds2, 250, 0, 3));
    const auto counts = ds.class_counts();
    EXPECT_EQ(counts[0], 250);
    EXPECT_EQ(counts[1], 50);
    const Dataset mds = datagen::generate(SyntheticSpec::for_family(Family::mds2, 250, 0, 3));
    const auto mcounts = mds.class_counts();
    EXPECT_EQ(mcounts[0] , 250);
    EXPECT_EQ(mcounts[1], 50);
}

TEST(Datagen, BalancedFamiliesExactlyBalanced) {
    for (const Family f : {Family::ds1, Family::ds3, Family::ds4, Family::mds1, Family::mds3,
                           Family::mzdt1, Family::mzdt2, Family::mdtlz1, Family::mdtlz2}) {
        const Dataset ds = datagen::generate(SyntheticSpec::for_family(f, 40, 0, 5));
        const auto counts = ds.class_counts();
        EXPECT_EQ(counts[0], counts[1]) << datagen::family_name(f);
    }
}

TEST(Datagen, Ds3ConicButNotLinearlySeparable) {
    const Dataset ds = datagen::generate(SyntheticSpec::for_family(Family::ds3, 250, 0, 11));
    const auto raw = oracle::rows_of(ds);
    EXPECT_FALSE(oracle::perceptron_separable(raw, ds.labels, 300));
    EXPECT_TRUE(oracle::perceptron_separable(oracle::quadratic_lift(raw), ds.labels));
    EXPECT_LT(oracle::best_linear_split_accuracy(ds), 0.9);

    const Dataset mds = datagen::generate(SyntheticSpec::for_family(Family::mds3, 250, 0, 11));
    const auto mraw = oracle::rows_of(mds);
    EXPECT_FALSE(oracle::perceptron_separable(mraw, mds.labels, 300));
    EXPECT_TRUE(oracle::perceptron_separable(oracle::quadratic_lift(mraw), mds.labels));
}

TEST(Datagen, Ds4NoGoodLinearSplit) {
    const Dataset ds = datagen::generate(SyntheticSpec::for_family(Family::ds4, 250, 0, 13));
    EXPECT_LT(oracle::best_linear_split_accuracy(ds), 0.75);
}

TEST(Datagen, MzdtDominance) {
    const Dataset ds = datagen::generate(SyntheticSpec::for_family(Family::mzdt1, 250, 30, 21));
    ASSERT_EQ(ds.n_features(), 30u);

    std::vector<std::vector<double>> front_objs, dominated_objs;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const auto objs = datagen::pareto_objectives(Family::mzdt1, ds.features.row(r));
        (ds.labels[r] == 1 ? front_objs : dominated_objs).push_back(objs);
    }
    // every dominated point is Pareto-dominated by at least one front point
    for (const auto& d0 : dominated_objs) {
        bool dominated = false;
        for (const auto& f1 : front_objs) {
            bool all_le = true, any_lt = false;
            for (std::size_t k = 0; k < d0.size(); ++k) {
                all_le &= f1[k] <= d0[k] + 1e-12;
                any_lt |= f1[k] < d0[k] - 1e-12;
            }
            if (all_le && any_lt) {
                dominated = true;
                break;
            }
        }
        EXPECT_TRUE(dominated);
        if (!dominated) break;
    }
}

TEST(Datagen, MzdtFrontAtAuxiliaryOptimum) {
    const Dataset ds = datagen::generate(SyntheticSpec::for_family(Family::mzdt1, 100, 30, 2));
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (ds.labels[r] != 1) continue;
        for (std::size_t c = 1; c < ds.n_features(); ++c)
            EXPECT_DOUBLE_EQ(ds.features(r, c), 0.0);
    }
    // dominated rows have at least one perturbed auxiliary variable
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (ds.labels[r] != 0) continue;
        double total = 0.0;
        for (std::size_t c = 1; c < ds.n_features(); ++c) total += ds.features(r, c);
        EXPECT_GT(total, 0.05);
    }
}

TEST(Datagen, Mdtlz2FrontOnUnitSphere) {
    const Dataset ds =
        datagen::generate(SyntheticSpec::for_family(Family::mdtlz2, 200, 30, 17));
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (ds.labels[r] != 1) continue;
        const auto objs = datagen::pareto_objectives(Family::mdtlz2, ds.features.row(r));
        double norm2 = 0.0;
        for (double f : objs) norm2 += f * f;
        EXPECT_NEAR(norm2, 1.0, 1e-9);
    }
}

TEST(Datagen, Mdtlz1Dominance) {
    const Dataset ds =
        datagen::generate(SyntheticSpec::for_family(Family::mdtlz1, 100, 30, 23));
    std::vector<std::vector<double>> front_objs;
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        if (ds.labels[r] == 1)
            front_objs.push_back(datagen::pareto_objectives(Family::mdtlz1, ds.features.row(r)));
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (ds.labels[r] != 0) continue;
        const auto d0 = datagen::pareto_objectives(Family::mdtlz1, ds.features.row(r));
        bool dominated = false;
        for (const auto& f1 : front_objs) {
            bool all_le = true, any_lt = false;
            for (std::size_t k = 0; k < d0.size(); ++k) {
                all_le &= f1[k] <= d0[k] + 1e-12;
                any_lt |= f1[k] < d0[k] - 1e-12;
            }
            if (all_le && any_lt) {
                dominated = true;
                break;
            }
        }
        EXPECT_TRUE(dominated);
        if (!dominated) break;
    }
}

TEST(Datagen, ErrorsOnBadSpecs) {
    auto bad_n = SyntheticSpec::for_family(Family::ds1);
    bad_n.n_per_class = 1;
    EXPECT_THROW(datagen::generate(bad_n), std::invalid_argument);

    auto bad_d = SyntheticSpec::for_family(Family::mzdt1);
    bad_d.d = 2;
    EXPECT_THROW(datagen::generate(bad_d), std::invalid_argument);

    EXPECT_THROW(datagen::parse_family("ds9"), std::invalid_argument);

    auto wrong_kind = SyntheticSpec::for_family(Family::ds1);
    EXPECT_THROW(datagen::gen_pareto(wrong_kind), std::invalid_argument);
    auto wrong_kind2 = SyntheticSpec::for_family(Family::mzdt1);
    EXPECT_THROW(datagen::gen_ds(wrong_kind2), std::invalid_argument);
}

TEST(Datagen, ConfigFileMatchesCodeDefaults) {
    // config/datagen.cfg documents the generator constants; keep it in sync
    // with the compiled defaults.
    std::ifstream in(std::string(CLASSLAB_SOURCE_DIR) + "/config/datagen.cfg");
    ASSERT_TRUE(in.is_open()) << "config/datagen.cfg missing";
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        kv[key] = std::stod(line.substr(eq + 1));
    }
    EXPECT_DOUBLE_EQ(kv.at("ds_margin"), datagen::defaults::kDsMargin);
    EXPECT_DOUBLE_EQ(kv.at("line_offset"), datagen::defaults::kLineOffset);
    EXPECT_DOUBLE_EQ(kv.at("circle_center"), datagen::defaults::kCircleCenter);
    EXPECT_DOUBLE_EQ(kv.at("circle_radius"), datagen::defaults::kCircleRadius);
    EXPECT_DOUBLE_EQ(kv.at("annulus_outer"), datagen::defaults::kAnnulusOuter);
    EXPECT_DOUBLE_EQ(kv.at("xor_half_span"), datagen::defaults::kXorHalfSpan);
    EXPECT_DOUBLE_EQ(kv.at("pareto_band_low"), datagen::defaults::kParetoBandLow);
    EXPECT_DOUBLE_EQ(kv.at("pareto_band_zdt"), datagen::defaults::kParetoBandZdt);
    EXPECT_DOUBLE_EQ(kv.at("pareto_band_dtlz"), datagen::defaults::kParetoBandDtlz);
    EXPECT_DOUBLE_EQ(kv.at("pareto_perturb_prob"), datagen::defaults::kParetoPerturbProb);
}
