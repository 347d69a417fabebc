#include <gtest/gtest.h>

#include <cmath>

#include "classlab/datagen.hpp"
#include "classlab/metrics.hpp"
#include "classlab/split.hpp"
#include "classlab/svm.hpp"
#include "oracles/svm_oracle.hpp"

using namespace classlab;

namespace {

Dataset from_rows(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
    Dataset ds;
    ds.features = Matrix::from_rows(rows);
    ds.labels = labels;
    for (std::size_t c = 0; c < ds.n_features(); ++c)
        ds.feature_names.push_back("x" + std::to_string(c + 1));
    ds.name = "inline";
    return ds;
}

Dataset random_instance(Rng& rng, std::size_t n) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
        labels.push_back(i < n / 2 ? 0 : 1);
    }
    return from_rows(rows, labels);
}

}  // namespace

TEST(RbfKernel, KnownValues) {
    const std::vector<double> p = {0.0, 0.0};
    const std::vector<double> q = {1.0, 0.0};
    EXPECT_DOUBLE_EQ(svm::rbf_kernel(p, p, 1.0), 1.0);
    EXPECT_NEAR(svm::rbf_kernel(p, q, 1.0), std::exp(-1.0), 1e-15);
    EXPECT_THROW(svm::rbf_kernel(p, std::vector<double>{1.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(svm::rbf_kernel(p, q, 0.0), std::invalid_argument);
}

TEST(RbfKernel, Symmetry) {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> p = {rng.normal(), rng.normal(), rng.normal()};
        const std::vector<double> q = {rng.normal(), rng.normal(), rng.normal()};
        const double gamma = 0.1 + rng.uniform();
        EXPECT_DOUBLE_EQ(svm::rbf_kernel(p, q, gamma), svm::rbf_kernel(q, p, gamma));
    }
}

TEST(SolveDual, TwoPointInstance) {
    const Dataset ds = from_rows({{0.0, 0.0}, {2.0, 0.0}}, {0, 1});
    svm::SvmParams params;
    params.c = 1e6;
    params.gamma = 0.5;
    const auto model = svm::solve_dual(ds, params);
    EXPECT_EQ(svm::svm_complexity(model), 2);
    // decision value flips sign between the two points
    const double y0 = svm::decision_value(model, ds.features.row(0));
    const double y1 = svm::decision_value(model, ds.features.row(1));
    EXPECT_LT(y0, 0.0);
    EXPECT_GT(y1, 0.0);
    // midpoint of the segment sits on the boundary
    const std::vector<double> mid = {1.0, 0.0};
    EXPECT_NEAR(svm::decision_value(model, mid), 0.0, 1e-6);
    // free support vectors sit on the margin
    EXPECT_NEAR(-y0, 1.0, params.kkt_tol + 1e-9);
    EXPECT_NEAR(y1, 1.0, params.kkt_tol + 1e-9);
}

TEST(SolveDual, MatchesBruteForceOracleOnSmallInstances) {
    Rng rng(1007);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4 + rng.uniform_index(3);  // 4..6
        Dataset ds = random_instance(rng, n);
        const double c = std::vector<double>{1.0, 10.0, 100.0}[rng.uniform_index(3)];
        const double gamma = 0.5 + rng.uniform();

        svm::SvmParams params;
        params.c = c;
        params.gamma = gamma;
        params.max_passes = 500;
        params.seed = trial;
        const auto model = svm::solve_dual(ds, params);

        std::vector<int> t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = ds.labels[i] == 1 ? 1 : -1;
        const auto optimum = oracle::brute_force_dual(
            n, t, c, [&](std::size_t i, std::size_t j) {
                return svm::rbf_kernel(ds.features.row(i), ds.features.row(j), gamma);
            });
        ASSERT_TRUE(optimum.found);
        EXPECT_NEAR(svm::dual_objective(model), optimum.objective, 1e-4) << "trial " << trial;
        EXPECT_LE(svm::max_kkt_violation(model, ds), params.kkt_tol + 1e-9);
        ++checked;
    }
    EXPECT_GE(checked, 20);
}

TEST(SolveDual, FeasibilityInvariants) {
    Rng rng(88);
    const Dataset ds = random_instance(rng, 40);
    svm::SvmParams params;
    params.c = 10.0;
    params.record_objective = true;
    const auto model = svm::solve_dual(ds, params);

    double equality = 0.0;
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        const double a = model.alphas[i];
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, params.c + 1e-12);
        equality += a * (ds.labels[i] == 1 ? 1.0 : -1.0);
    }
    EXPECT_NEAR(equality, 0.0, 1e-9);

    // dual objective is non-decreasing across accepted pairwise updates
    for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
        EXPECT_GE(model.objective_trace[i], model.objective_trace[i - 1] - 1e-9);
    EXPECT_FALSE(model.objective_trace.empty());
}

TEST(DecisionValue, MatchesDirectSummationOracle) {
    Rng rng(5);
    const Dataset ds = random_instance(rng, 6);
    svm::SvmParams params;
    params.c = 5.0;
    params.gamma = 0.7;
    const auto model = svm::solve_dual(ds, params);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        // independent re-evaluation of the kernel expansion
        double expected = model.bias;
        for (const auto& sv : model.support_vectors) {
            double dist2 = 0.0;
            for (std::size_t c = 0; c < x.size(); ++c)
                dist2 += (x[c] - sv.x[c]) * (x[c] - sv.x[c]);
            expected += sv.alpha * sv.t * std::exp(-params.gamma * dist2);
        }
        EXPECT_NEAR(svm::decision_value(model, x), expected, 1e-12);
    }
}

TEST(DecisionValue, EmptyModelIsBias) {
    svm::SvmModel model;
    model.bias = -0.25;
    model.gamma = 1.0;
    const std::vector<double> x = {1.0, 2.0};
    EXPECT_DOUBLE_EQ(svm::decision_value(model, x), -0.25);
    EXPECT_EQ(svm::predict(model, x), 0);
}

TEST(SvmComplexity, ThresholdCount) {
    svm::SvmModel model;
    model.c = 1.0;
    model.gamma = 1.0;
    model.sv_epsilon = 1e-8;
    // hand-set alphas (0, 0.5, C, 1e-12): only 0.5 and C exceed the epsilon
    for (const double a : {0.0, 0.5, 1.0, 1e-12}) {
        if (a > model.sv_epsilon)
            model.support_vectors.push_back({{0.0, 0.0}, 1, a});
    }
    EXPECT_EQ(svm::svm_complexity(model), 2);
}

TEST(SvmJson, RoundTrip) {
    Rng rng(23);
    const Dataset ds = random_instance(rng, 12);
    svm::SvmParams params;
    params.c = 10.0;
    const auto model = svm::solve_dual(ds, params);
    const auto restored = svm::SvmModel::from_json(model.to_json());
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> x = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        EXPECT_NEAR(svm::decision_value(model, x), svm::decision_value(restored, x), 1e-12);
    }
}

TEST(SvmSweep, Ds4DirectionLowCNeedsManySupportVectors) {
    // XOR-type family: at C=1 the soft margin floods with support vectors
    // compared to C=1000
    const Dataset ds = datagen::generate(
        datagen::SyntheticSpec::for_family(datagen::Family::ds4, 150, 0, 55));
    double sv_low = 0.0, sv_high = 0.0;
    const int runs = 10;
    for (int run = 0; run < runs; ++run) {
        const SplitPair fold = split(ds, 0.7, 700 + run, true);
        svm::SvmParams low;
        low.c = 1.0;
        low.seed = run;
        svm::SvmParams high;
        high.c = 1000.0;
        high.seed = run;
        sv_low += svm::svm_complexity(svm::solve_dual(fold.train, low));
        sv_high += svm::svm_complexity(svm::solve_dual(fold.train, high));
    }
    EXPECT_GT(sv_low / runs, sv_high / runs);
}

TEST(SvmSweep, SupportVectorCountDropsWithC) {
    // C-sweep direction on separable data: C=1000 needs far fewer support
    // vectors than C=1.
    const Dataset ds = datagen::generate(
        datagen::SyntheticSpec::for_family(datagen::Family::ds1, 150, 0, 77));
    double sv_low = 0.0, sv_high = 0.0, acc_high = 0.0;
    const int runs = 10;
    for (int run = 0; run < runs; ++run) {
        const SplitPair fold = split(ds, 0.7, 500 + run, true);
        svm::SvmParams low;
        low.c = 1.0;
        low.seed = run;
        svm::SvmParams high;
        high.c = 1000.0;
        high.seed = run;
        const auto model_low = svm::solve_dual(fold.train, low);
        const auto model_high = svm::solve_dual(fold.train, high);
        sv_low += svm::svm_complexity(model_low);
        sv_high += svm::svm_complexity(model_high);
        acc_high += evaluate(
            [&](std::span<const double> x) { return svm::predict(model_high, x); },
            fold.test);
    }
    EXPECT_GT(sv_low / runs, sv_high / runs);
    EXPECT_GE(acc_high / runs, 0.95);
}
