#pragma once

// Experiment harness: repeated randomized 70/30 runs, mean +/- std
// aggregation of test accuracy and complexity, and table rendering with
// Wilcoxon significance marking against the best entry of each row.
//
// The dataset is materialized once per experiment; each run re-splits it
// with seed base_seed + run and trains with the same per-run seed.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "classlab/cart.hpp"
#include "classlab/dataset.hpp"
#include "classlab/datagen.hpp"
#include "classlab/gp.hpp"
#include "classlab/metrics.hpp"
#include "classlab/nldt.hpp"
#include "classlab/split.hpp"
#include "classlab/stats.hpp"
#include "classlab/svm.hpp"

namespace classlab::bench {

struct FittedClassifier {
    Predictor predict;
    double complexity = 0.0;
};

// Trains on the given fold; the seed drives any stochastic component.
using Trainer = std::function<FittedClassifier(const Dataset&, std::uint64_t)>;

struct MethodSpec {
    std::string label;
    Method method = Method::cart;
    Trainer trainer;
};

inline MethodSpec make_cart_method(cart::Params params = {}, std::string label = "cart") {
    return {std::move(label), Method::cart,
            [params](const Dataset& train, std::uint64_t) {
                auto tree = std::make_shared<cart::AxisTree>(cart::fit_cart(train, params));
                return FittedClassifier{
                    [tree](std::span<const double> x) { return tree->predict(x); },
                    static_cast<double>(cart::cart_complexity(*tree))};
            }};
}

inline MethodSpec make_svm_method(svm::SvmParams params = {}, std::string label = "svm") {
    return {std::move(label), Method::svm,
            [params](const Dataset& train, std::uint64_t seed) {
                svm::SvmParams p = params;
                p.seed = seed;
                auto model = std::make_shared<svm::SvmModel>(svm::solve_dual(train, p));
                return FittedClassifier{
                    [model](std::span<const double> x) { return svm::predict(*model, x); },
                    static_cast<double>(svm::svm_complexity(*model))};
            }};
}

inline MethodSpec make_gp_method(gp::GpConfig config = {}, std::string label = "gp") {
    return {std::move(label), Method::gp,
            [config](const Dataset& train, std::uint64_t seed) {
                gp::GpConfig c = config;
                c.seed = seed;
                auto tree = std::make_shared<gp::GpTree>(gp::evolve(train, c));
                return FittedClassifier{
                    [tree](std::span<const double> x) { return gp::predict(*tree, x); },
                    static_cast<double>(gp::gp_complexity(*tree))};
            }};
}

inline MethodSpec make_nldt_method(nldt::NldtParams params = {}, std::string label = "nldt") {
    return {std::move(label), Method::nldt,
            [params](const Dataset& train, std::uint64_t seed) {
                nldt::NldtParams p = params;
                p.seed = seed;
                auto tree = std::make_shared<nldt::NldtTree>(nldt::fit_nldt(train, p));
                return FittedClassifier{
                    [tree](std::span<const double> x) { return tree->predict(x); },
                    static_cast<double>(nldt::nldt_complexity(*tree))};
            }};
}

struct RunRecord {
    int run = 0;
    double accuracy_train = 0.0;
    double accuracy_test = 0.0;
    double complexity = 0.0;
    double wall_time = 0.0;
    bool failed = false;
    std::string error;
};

inline EvalReport to_eval_report(const RunRecord& rec, Method method) {
    EvalReport report;
    report.accuracy_train = rec.accuracy_train;
    report.accuracy_test = rec.accuracy_test;
    report.complexity = rec.complexity;
    report.fit_wall_time = rec.wall_time;
    report.method_tag = method;
    return report;
}

struct RunStats {
    std::vector<RunRecord> runs;  // includes failed runs
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double mean_complexity = 0.0;
    double std_complexity = 0.0;
    double mean_wall_time = 0.0;

    std::vector<double> accuracy_samples() const {
        std::vector<double> v;
        for (const auto& r : runs)
            if (!r.failed) v.push_back(r.accuracy_test);
        return v;
    }
    std::vector<double> complexity_samples() const {
        std::vector<double> v;
        for (const auto& r : runs)
            if (!r.failed) v.push_back(r.complexity);
        return v;
    }

    void recompute() {
        const auto acc = accuracy_samples();
        const auto cplx = complexity_samples();
        std::vector<double> times;
        for (const auto& r : runs)
            if (!r.failed) times.push_back(r.wall_time);
        mean_accuracy = mean(acc);
        std_accuracy = sample_std(acc);
        mean_complexity = mean(cplx);
        std_complexity = sample_std(cplx);
        mean_wall_time = mean(times);
    }
};

struct ExperimentSpec {
    Dataset dataset;
    std::vector<MethodSpec> methods;  // one grid cell per entry
    int n_runs = 50;
    std::uint64_t base_seed = 0;
    double train_fraction = 0.7;
    bool stratified = true;
};

// Runs are seeded individually (base_seed + run), so results are identical
// whether executed sequentially or on `threads` workers.
inline RunStats run_experiment_cell(const Dataset& dataset, const MethodSpec& method,
                                    int n_runs, std::uint64_t base_seed,
                                    double train_fraction = 0.7, bool stratified = true,
                                    int threads = 1) {
    if (n_runs < 1) throw std::invalid_argument("run_experiment: need n_runs >= 1");
    RunStats stats;
    stats.runs.resize(static_cast<std::size_t>(n_runs));

    auto execute = [&](int run) {
        const std::uint64_t run_seed = base_seed + static_cast<std::uint64_t>(run);
        RunRecord rec;
        rec.run = run;
        try {
            const SplitPair fold = split(dataset, train_fraction, run_seed, stratified);
            const auto start = std::chrono::steady_clock::now();
            const FittedClassifier fitted = method.trainer(fold.train, run_seed);
            const auto stop = std::chrono::steady_clock::now();
            rec.wall_time = std::chrono::duration<double>(stop - start).count();
            rec.accuracy_train = evaluate(fitted.predict, fold.train);
            rec.accuracy_test = evaluate(fitted.predict, fold.test);
            rec.complexity = fitted.complexity;
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
        stats.runs[static_cast<std::size_t>(run)] = std::move(rec);
    };

    if (threads <= 1) {
        for (int run = 0; run < n_runs; ++run) execute(run);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        const int worker_count = std::min(threads, n_runs);
        workers.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&]() {
                for (int run = next.fetch_add(1); run < n_runs; run = next.fetch_add(1))
                    execute(run);
            });
        }
        for (auto& t : workers) t.join();
    }

    int successes = 0;
    for (const auto& rec : stats.runs)
        if (!rec.failed) ++successes;
    if (successes == 0)
        throw std::runtime_error("run_experiment: every run failed for method '" +
                                 method.label + "'");
    stats.recompute();
    return stats;
}

// Runs every method cell of the spec; results align with spec.methods.
inline std::vector<RunStats> run_experiment(const ExperimentSpec& spec) {
    std::vector<RunStats> cells;
    cells.reserve(spec.methods.size());
    for (const auto& m : spec.methods)
        cells.push_back(run_experiment_cell(spec.dataset, m, spec.n_runs, spec.base_seed,
                                            spec.train_fraction, spec.stratified));
    return cells;
}

// "mean +/- std" with two decimals, e.g. (99.546, 1.084) -> "99.55 ± 1.08".
inline std::string format_mean_std(double mean_value, double std_value) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << mean_value << " ± " << std_value;
    return out.str();
}

enum class TableFormat { markdown, csv };

struct TableRow {
    std::string dataset_name;
    std::vector<RunStats> cells;  // aligned with the method label list
};

// Renders the accuracy/complexity summary table. Accuracy is shown in
// percent. Per row, the best accuracy (highest mean) is bolded in markdown;
// entries whose samples are not significantly different from the best
// (two-sided rank-sum p >= 0.05) are italicized in markdown and suffixed
// with '*' in CSV. The same marking is applied to the complexity line with
// "best" meaning lowest mean complexity.
inline std::string render_table(const std::vector<std::string>& method_labels,
                                const std::vector<TableRow>& rows, TableFormat format) {
    std::ostringstream out;
    const char sep = format == TableFormat::csv ? ',' : '|';

    auto emit_header = [&]() {
        if (format == TableFormat::csv) {
            out << "dataset,metric";
            for (const auto& label : method_labels) out << sep << label;
            out << "\n";
        } else {
            out << "| dataset | metric ";
            for (const auto& label : method_labels) out << "| " << label << " ";
            out << "|\n|---|---";
            for (std::size_t i = 0; i < method_labels.size(); ++i) out << "|---";
            out << "|\n";
        }
    };

    auto row_line = [&](const TableRow& row, bool accuracy_line) {
        const std::size_t k = row.cells.size();
        // index of the best cell for this line
        std::size_t best = 0;
        for (std::size_t i = 1; i < k; ++i) {
            const double v = accuracy_line ? row.cells[i].mean_accuracy
                                           : row.cells[i].mean_complexity;
            const double vb = accuracy_line ? row.cells[best].mean_accuracy
                                            : row.cells[best].mean_complexity;
            if (accuracy_line ? v > vb : v < vb) best = i;
        }
        const auto best_samples = accuracy_line ? row.cells[best].accuracy_samples()
                                                : row.cells[best].complexity_samples();
        if (format == TableFormat::csv) {
            out << row.dataset_name << sep << (accuracy_line ? "accuracy" : "complexity");
        } else {
            out << "| " << row.dataset_name << " | "
                << (accuracy_line ? "accuracy" : "complexity") << " ";
        }
        for (std::size_t i = 0; i < k; ++i) {
            const auto& cell = row.cells[i];
            const double m = accuracy_line ? 100.0 * cell.mean_accuracy : cell.mean_complexity;
            const double s = accuracy_line ? 100.0 * cell.std_accuracy : cell.std_complexity;
            std::string text = format_mean_std(m, s);
            bool insignificant = false;
            if (i != best && best_samples.size() >= 2) {
                const auto samples = accuracy_line ? cell.accuracy_samples()
                                                   : cell.complexity_samples();
                if (samples.size() >= 2) {
                    const auto test = wilcoxon_rank_sum(best_samples, samples);
                    insignificant = !test.significant;
                }
            }
            if (format == TableFormat::csv) {
                if (insignificant) text += "*";
                out << sep << text;
            } else {
                if (i == best && accuracy_line) text = "**" + text + "**";
                else if (insignificant) text = "*" + text + "*";
                out << "| " << text << " ";
            }
        }
        out << (format == TableFormat::csv ? "\n" : "|\n");
    };

    emit_header();
    for (const auto& row : rows) {
        row_line(row, true);
        row_line(row, false);
    }
    return out.str();
}

// Results directory layout: runs.csv (one row per run), summary.md,
// summary.csv, spec.json (frozen configuration echo).
inline void write_results(const std::filesystem::path& dir,
                          const std::vector<std::string>& method_labels,
                          const std::vector<TableRow>& rows, const nlohmann::json& spec_echo) {
    std::filesystem::create_directories(dir);

    std::ofstream runs(dir / "runs.csv");
    runs << "dataset,method,run,accuracy_train,accuracy_test,complexity,wall_time,failed\n";
    runs.precision(10);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            for (const auto& rec : row.cells[i].runs) {
                runs << row.dataset_name << ',' << method_labels[i] << ',' << rec.run << ','
                     << rec.accuracy_train << ',' << rec.accuracy_test << ','
                     << rec.complexity << ',' << rec.wall_time << ','
                     << (rec.failed ? 1 : 0) << "\n";
            }
        }
    }

    std::ofstream md(dir / "summary.md");
    md << render_table(method_labels, rows, TableFormat::markdown);
    std::ofstream csv(dir / "summary.csv");
    csv << render_table(method_labels, rows, TableFormat::csv);
    std::ofstream spec(dir / "spec.json");
    spec << spec_echo.dump(2) << "\n";
}

// Results root: CLASSLAB_RESULTS_ROOT env var, else ./results.
inline std::filesystem::path results_root() {
    if (const char* env = std::getenv("CLASSLAB_RESULTS_ROOT")) return env;
    return "results";
}

}  // namespace classlab::bench
