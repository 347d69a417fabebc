// classlab command-line interface.
//
// Subcommands:
//   gen      write a synthetic dataset (CSV + JSON sidecar)
//   fit      train one classifier and write its model JSON
//   predict  apply a saved model to a CSV
//   bench    repeated-run comparison of methods on datasets
//   sweep    single-method hyperparameter sweep (table per parameter value)
//
// Every flag has a config-file equivalent: pass --config FILE where FILE
// holds "key = value" lines mirroring the long flag names. A flag given on
// the command line wins over the config file (with a warning).
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "classlab/classlab.hpp"

namespace {

using namespace classlab;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    for (const auto& s : split_list(csv)) out.push_back(std::stod(s));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (const auto& s : split_list(csv)) out.push_back(std::stoi(s));
    return out;
}

// Reads "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

// Expands --config entries into synthetic flags. Flags already present on
// the command line win; a warning is printed for each shadowed key.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") config_path = args[i + 1];
    }
    if (config_path.empty()) return args;

    std::vector<std::string> out = args;
    for (const auto& [key, value] : read_config_file(config_path)) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args)
            if (a == flag) {
                present = true;
                break;
            }
        if (present) {
            std::cerr << "warning: config key '" << key
                      << "' overridden by command-line flag\n";
            continue;
        }
        out.push_back(flag);
        out.push_back(value);
    }
    return out;
}

struct CommonFlags {
    std::uint64_t seed = 0;
    std::string config;
};

// Maps the CLI's --n (approximate total points) to the per-class count; the
// 5:1 families interpret it so that majority + minority comes out near n.
datagen::SyntheticSpec make_spec(const std::string& family, std::size_t n, std::size_t d,
                                 std::uint64_t seed, double noise) {
    const auto fam = datagen::parse_family(family);
    auto spec = datagen::SyntheticSpec::for_family(fam, 250, d, seed);
    if (n > 0) {
        const bool biased = fam == datagen::Family::ds2 || fam == datagen::Family::mds2;
        spec.n_per_class = std::max<std::size_t>(2, biased ? n * 5 / 6 : n / 2);
    }
    if (noise > 0.0) spec.noise = noise;
    return spec;
}

struct MethodFlags {
    // cart
    int max_depth = 0;  // 0 keeps the method default
    int min_leaf = 1;
    double min_impurity_decrease = 1e-7;
    // svm
    double c = 1000.0;
    double gamma = 0.0;
    double kkt_tol = 1e-3;
    int max_passes = 100;
    // gp
    double pc = 0.001;
    int population = 500;
    int generations = 50;
    // nldt
    double tau_i = 0.05;
    int power_laws = 3;
    std::string exponent_set = "-3,-2,-1,0,1,2,3";
    int min_node_size = 10;
    int lower_pop = 40, lower_gens = 50, upper_pop = 40, upper_gens = 30;
};

void add_method_flags(CLI::App* cmd, MethodFlags& f, bool with_swept_flags = true) {
    cmd->add_option("--max-depth", f.max_depth, "tree depth cap (cart/nldt/gp)");
    cmd->add_option("--min-leaf", f.min_leaf, "cart: min rows per leaf");
    cmd->add_option("--min-impurity-decrease", f.min_impurity_decrease,
                    "cart: min Gini decrease per split");
    if (with_swept_flags) {
        cmd->add_option("--c", f.c, "svm: penalty parameter C");
        cmd->add_option("--pc", f.pc, "gp: parsimony coefficient");
    }
    cmd->add_option("--gamma", f.gamma, "svm: RBF gamma (<=0 for scale-aware default)");
    cmd->add_option("--kkt-tol", f.kkt_tol, "svm: KKT tolerance");
    cmd->add_option("--max-passes", f.max_passes, "svm: optimization sweep cap");
    cmd->add_option("--population", f.population, "gp: population size");
    cmd->add_option("--generations", f.generations, "gp: generations");
    cmd->add_option("--tau-i", f.tau_i, "nldt: impurity threshold");
    cmd->add_option("--power-laws", f.power_laws, "nldt: power laws per rule");
    cmd->add_option("--exponent-set", f.exponent_set, "nldt: allowed exponents");
    cmd->add_option("--min-node-size", f.min_node_size, "nldt: min rows to split");
    cmd->add_option("--lower-pop", f.lower_pop, "nldt: lower-level population");
    cmd->add_option("--lower-gens", f.lower_gens, "nldt: lower-level generations");
    cmd->add_option("--upper-pop", f.upper_pop, "nldt: upper-level population");
    cmd->add_option("--upper-gens", f.upper_gens, "nldt: upper-level generations");
}

cart::Params cart_params(const MethodFlags& f) {
    cart::Params p;
    if (f.max_depth > 0) p.max_depth = f.max_depth;
    p.min_leaf = f.min_leaf;
    p.min_impurity_decrease = f.min_impurity_decrease;
    return p;
}

svm::SvmParams svm_params(const MethodFlags& f, std::uint64_t seed) {
    svm::SvmParams p;
    p.c = f.c;
    p.gamma = f.gamma;
    p.kkt_tol = f.kkt_tol;
    p.max_passes = f.max_passes;
    p.seed = seed;
    return p;
}

gp::GpConfig gp_config(const MethodFlags& f, std::uint64_t seed) {
    gp::GpConfig c;
    c.parsimony = f.pc;
    c.population_size = f.population;
    c.generations = f.generations;
    if (f.max_depth > 0) c.max_depth = f.max_depth;
    c.seed = seed;
    return c;
}

nldt::NldtParams nldt_params(const MethodFlags& f, std::uint64_t seed) {
    nldt::NldtParams p;
    p.tau_impurity = f.tau_i;
    p.n_power_laws = f.power_laws;
    p.exponent_set = parse_int_list(f.exponent_set);
    if (f.max_depth > 0) p.max_depth = f.max_depth;
    p.min_node_size = f.min_node_size;
    p.lower_population = f.lower_pop;
    p.lower_generations = f.lower_gens;
    p.upper_population = f.upper_pop;
    p.upper_generations = f.upper_gens;
    p.seed = seed;
    return p;
}

bench::MethodSpec method_spec(const std::string& method, const MethodFlags& f,
                              std::uint64_t seed, const std::string& label = "") {
    const std::string name = label.empty() ? method : label;
    if (method == "cart") return bench::make_cart_method(cart_params(f), name);
    if (method == "svm") return bench::make_svm_method(svm_params(f, seed), name);
    if (method == "gp") return bench::make_gp_method(gp_config(f, seed), name);
    if (method == "nldt") return bench::make_nldt_method(nldt_params(f, seed), name);
    throw std::runtime_error("unknown method: " + method);
}

int cmd_gen(const std::string& family, std::size_t n, std::size_t d, std::uint64_t seed,
            double noise, const std::string& out) {
    const Dataset ds = datagen::generate(make_spec(family, n, d, seed, noise));
    save_csv(ds, out);
    std::cerr << "wrote " << ds.n_rows() << " rows x " << ds.n_features() << " features to "
              << out << " (+ sidecar)\n";
    return 0;
}

int cmd_fit(const std::string& method, const std::string& train_path,
            const std::string& label_column, const MethodFlags& flags, std::uint64_t seed,
            const std::string& out) {
    const Dataset train = load_csv(train_path, label_column);
    nlohmann::json model_json;
    if (method == "cart") {
        const auto tree = cart::fit_cart(train, cart_params(flags));
        model_json = tree.to_json();
        std::cout << tree.dump_rules(train.feature_names);
        std::cerr << "cart: " << cart::cart_complexity(tree) << " nodes, train accuracy "
                  << evaluate([&](std::span<const double> x) { return tree.predict(x); },
                              train)
                  << "\n";
    } else if (method == "svm") {
        const auto model = svm::solve_dual(train, svm_params(flags, seed));
        model_json = model.to_json();
        std::cerr << "svm: " << svm::svm_complexity(model) << " support vectors"
                  << (model.converged ? "" : " (not converged)") << ", train accuracy "
                  << evaluate([&](std::span<const double> x) { return svm::predict(model, x); },
                              train)
                  << "\n";
    } else if (method == "gp") {
        const auto result = gp::evolve_detailed(train, gp_config(flags, seed));
        model_json = {{"method", "gp"},
                      {"expression", gp::render_expression(result.best)},
                      {"nodes", result.best.to_json()},
                      {"fitness", result.best_fitness},
                      {"loss", result.best_loss},
                      {"size", result.best.size()},
                      {"internal_nodes", gp::gp_complexity(result.best)}};
        std::cout << gp::render_expression(result.best) << "\n";
        std::cerr << "gp: fitness " << result.best_fitness << ", "
                  << gp::gp_complexity(result.best) << " internal nodes\n";
        if (!out.empty()) {
            std::ofstream gens(out + ".generations.csv");
            gens << "generation,best_fitness,best_loss,best_size,mean_fitness\n";
            gens.precision(12);
            for (const auto& s : result.history)
                gens << s.generation << ',' << s.best_fitness << ',' << s.best_loss << ','
                     << s.best_size << ',' << s.mean_fitness << "\n";
        }
    } else if (method == "nldt") {
        const auto tree = nldt::fit_nldt(train, nldt_params(flags, seed));
        model_json = tree.to_json();
        std::cout << nldt::render_tree(tree, train.feature_names);
        std::cerr << "nldt: " << tree.conditional_node_count() << " rules, complexity "
                  << nldt::nldt_complexity(tree) << ", train accuracy "
                  << evaluate([&](std::span<const double> x) { return tree.predict(x); },
                              train)
                  << "\n";
    } else {
        throw std::runtime_error("unknown method: " + method);
    }
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write model file: " + out);
        f << model_json.dump(2) << "\n";
    }
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& label_column, const std::string& out) {
    std::ifstream mf(model_path);
    if (!mf) throw std::runtime_error("cannot open model file: " + model_path);
    nlohmann::json j;
    mf >> j;
    const std::string method = j.at("method").get<std::string>();

    Predictor predict;
    if (method == "cart") {
        auto tree = std::make_shared<cart::AxisTree>(cart::AxisTree::from_json(j));
        predict = [tree](std::span<const double> x) { return tree->predict(x); };
    } else if (method == "svm") {
        auto model = std::make_shared<svm::SvmModel>(svm::SvmModel::from_json(j));
        predict = [model](std::span<const double> x) { return svm::predict(*model, x); };
    } else if (method == "gp") {
        auto tree = std::make_shared<gp::GpTree>(gp::GpTree::from_json(j.at("nodes")));
        predict = [tree](std::span<const double> x) { return gp::predict(*tree, x); };
    } else if (method == "nldt") {
        auto tree = std::make_shared<nldt::NldtTree>(nldt::NldtTree::from_json(j));
        predict = [tree](std::span<const double> x) { return tree->predict(x); };
    } else {
        throw std::runtime_error("unknown model method: " + method);
    }

    const Dataset data = load_csv(data_path, label_column);
    std::ostringstream preds;
    preds << "row,prediction\n";
    std::size_t correct = 0;
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        const int y = predict(data.features.row(r));
        preds << r << ',' << data.label_names[static_cast<std::size_t>(y)] << "\n";
        if (y == data.labels[r]) ++correct;
    }
    if (out.empty()) {
        std::cout << preds.str();
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write predictions: " + out);
        f << preds.str();
    }
    std::cerr << "accuracy " << static_cast<double>(correct) / data.n_rows() << " on "
              << data.n_rows() << " rows\n";
    return 0;
}

int cmd_bench(const std::string& methods_csv, const std::string& families_csv,
              const std::string& dataset_path, const std::string& label_column, int runs,
              std::uint64_t seed, double fraction, bool stratified, std::size_t bench_n,
              const MethodFlags& flags, const std::string& out_dir, int threads) {
    std::vector<bench::MethodSpec> methods;
    for (const auto& m : split_list(methods_csv)) methods.push_back(method_spec(m, flags, seed));
    if (methods.empty()) throw std::runtime_error("no methods given");

    std::vector<Dataset> datasets;
    if (!dataset_path.empty()) {
        datasets.push_back(load_csv(dataset_path, label_column));
    } else {
        for (const auto& fam : split_list(families_csv))
            datasets.push_back(datagen::generate(make_spec(fam, bench_n, 0, seed, 0.0)));
    }
    if (datasets.empty()) throw std::runtime_error("no datasets given");

    std::vector<std::string> labels;
    for (const auto& m : methods) labels.push_back(m.label);

    std::vector<bench::TableRow> rows;
    for (const auto& ds : datasets) {
        bench::TableRow row;
        row.dataset_name = ds.name;
        for (const auto& m : methods) {
            std::cerr << "bench: " << ds.name << " / " << m.label << " (" << runs
                      << " runs)\n";
            row.cells.push_back(bench::run_experiment_cell(ds, m, runs, seed, fraction,
                                                           stratified, threads));
        }
        rows.push_back(std::move(row));
    }

    const std::filesystem::path dir =
        out_dir.empty() ? bench::results_root() / "bench" : std::filesystem::path(out_dir);
    nlohmann::json echo = {{"command", "bench"},
                           {"methods", split_list(methods_csv)},
                           {"runs", runs},
                           {"seed", seed},
                           {"train_fraction", fraction}};
    bench::write_results(dir, labels, rows, echo);
    std::cout << bench::render_table(labels, rows, bench::TableFormat::markdown);
    std::cerr << "results written to " << dir << "\n";
    return 0;
}

int cmd_sweep(const std::string& method, const std::string& c_list, const std::string& pc_list,
              const std::string& families_csv, const std::string& dataset_path,
              const std::string& label_column, int runs, std::uint64_t seed, double fraction,
              bool stratified, std::size_t sweep_n, const MethodFlags& flags,
              const std::string& out_dir, int threads) {
    // Build one method spec per swept parameter value.
    std::vector<bench::MethodSpec> methods;
    if (method == "svm") {
        for (double c : parse_double_list(c_list.empty() ? "1,10,1000" : c_list)) {
            MethodFlags f = flags;
            f.c = c;
            std::ostringstream label;
            label << "C=" << c;
            methods.push_back(method_spec("svm", f, seed, label.str()));
        }
    } else if (method == "gp") {
        for (double pc : parse_double_list(pc_list.empty() ? "0.01,0.005,0.001" : pc_list)) {
            MethodFlags f = flags;
            f.pc = pc;
            std::ostringstream label;
            label << "Pc=" << pc;
            methods.push_back(method_spec("gp", f, seed, label.str()));
        }
    } else {
        throw std::runtime_error("sweep supports --method svm (over --c) or gp (over --pc)");
    }

    std::vector<Dataset> datasets;
    if (!dataset_path.empty()) {
        datasets.push_back(load_csv(dataset_path, label_column));
    } else {
        for (const auto& fam : split_list(families_csv))
            datasets.push_back(datagen::generate(make_spec(fam, sweep_n, 0, seed, 0.0)));
    }
    if (datasets.empty()) throw std::runtime_error("no datasets given");

    std::vector<std::string> labels;
    for (const auto& m : methods) labels.push_back(m.label);
    std::vector<bench::TableRow> rows;
    for (const auto& ds : datasets) {
        bench::TableRow row;
        row.dataset_name = ds.name;
        for (const auto& m : methods) {
            std::cerr << "sweep: " << ds.name << " / " << m.label << " (" << runs
                      << " runs)\n";
            row.cells.push_back(bench::run_experiment_cell(ds, m, runs, seed, fraction,
                                                           stratified, threads));
        }
        rows.push_back(std::move(row));
    }

    const std::filesystem::path dir =
        out_dir.empty() ? bench::results_root() / "sweep" : std::filesystem::path(out_dir);
    nlohmann::json echo = {{"command", "sweep"}, {"method", method}, {"runs", runs},
                           {"seed", seed}};
    bench::write_results(dir, labels, rows, echo);
    std::cout << bench::render_table(labels, rows, bench::TableFormat::markdown);
    std::cerr << "results written to " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> raw_args(argv + 1, argv + argc);
    std::vector<std::string> args;
    try {
        args = apply_config(raw_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"classlab: interpretable binary classifier laboratory"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "config file with key = value flag defaults");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::string gen_family, gen_out = "dataset.csv";
    std::size_t gen_n = 0, gen_d = 0;
    std::uint64_t gen_seed = 0;
    double gen_noise = 0.0;
    gen->add_option("--family", gen_family, "dataset family")->required();
    gen->add_option("--n", gen_n, "total number of points (default 500)");
    gen->add_option("--d", gen_d, "feature count (Pareto families)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--noise", gen_noise, "margin / perturbation parameter");
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_option("--config", config_path, "config file");

    // fit
    auto* fit = app.add_subcommand("fit", "train a classifier");
    std::string fit_method, fit_train, fit_label = "label", fit_out;
    std::uint64_t fit_seed = 0;
    MethodFlags fit_flags;
    fit->add_option("--method", fit_method, "cart|svm|gp|nldt")->required();
    fit->add_option("--train", fit_train, "training CSV")->required();
    fit->add_option("--label-column", fit_label, "label column name");
    fit->add_option("--seed", fit_seed, "training seed");
    fit->add_option("--out", fit_out, "model JSON output path");
    fit->add_option("--config", config_path, "config file");
    add_method_flags(fit, fit_flags);

    // predict
    auto* predict = app.add_subcommand("predict", "apply a saved model");
    std::string pred_model, pred_data, pred_label = "label", pred_out;
    predict->add_option("--model", pred_model, "model JSON path")->required();
    predict->add_option("--data", pred_data, "data CSV")->required();
    predict->add_option("--label-column", pred_label, "label column name");
    predict->add_option("--out", pred_out, "predictions CSV (stdout when omitted)");
    predict->add_option("--config", config_path, "config file");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "multi-method benchmark");
    std::string bench_methods = "cart,svm,gp,nldt", bench_families = "ds1,ds3,ds4";
    std::string bench_dataset, bench_label = "label", bench_out;
    int bench_runs = 50, bench_threads = 1;
    std::uint64_t bench_seed = 0;
    double bench_fraction = 0.7;
    bool bench_stratified = true;
    std::size_t bench_n = 0;
    bool bench_seed_given = false;
    MethodFlags bench_flags;
    bench_cmd->add_option("--methods", bench_methods, "comma list of methods");
    bench_cmd->add_option("--families", bench_families, "comma list of dataset families");
    bench_cmd->add_option("--dataset", bench_dataset, "CSV dataset (instead of families)");
    bench_cmd->add_option("--label-column", bench_label, "label column name");
    bench_cmd->add_option("--runs", bench_runs, "runs per cell");
    auto* bseed = bench_cmd->add_option("--seed", bench_seed, "base seed (required)");
    bench_cmd->add_option("--fraction", bench_fraction, "training fraction");
    bench_cmd->add_option("--out-dir", bench_out, "results directory");
    bench_cmd->add_option("--threads", bench_threads, "parallel runs cap");
    bench_cmd->add_flag("--stratified,!--no-stratified", bench_stratified,
                        "stratify splits (default on)");
    bench_cmd->add_option("--n", bench_n, "generated dataset size (total points)");
    bench_cmd->add_option("--config", config_path, "config file");
    add_method_flags(bench_cmd, bench_flags);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "hyperparameter sweep");
    std::string sweep_method, sweep_c, sweep_pc, sweep_families = "ds1";
    std::string sweep_dataset, sweep_label = "label", sweep_out;
    int sweep_runs = 50, sweep_threads = 1;
    std::uint64_t sweep_seed = 0;
    double sweep_fraction = 0.7;
    bool sweep_stratified = true;
    std::size_t sweep_n = 0;
    MethodFlags sweep_flags;
    sweep->add_option("--method", sweep_method, "svm|gp")->required();
    sweep->add_option("--c", sweep_c, "comma list of C values (svm)");
    sweep->add_option("--pc", sweep_pc, "comma list of parsimony values (gp)");
    sweep->add_option("--families", sweep_families, "comma list of dataset families");
    sweep->add_option("--dataset", sweep_dataset, "CSV dataset (instead of families)");
    sweep->add_option("--label-column", sweep_label, "label column name");
    sweep->add_option("--runs", sweep_runs, "runs per cell");
    auto* sseed = sweep->add_option("--seed", sweep_seed, "base seed (required)");
    sweep->add_option("--fraction", sweep_fraction, "training fraction");
    sweep->add_option("--out-dir", sweep_out, "results directory");
    sweep->add_option("--threads", sweep_threads, "parallel runs cap");
    sweep->add_flag("--stratified,!--no-stratified", sweep_stratified,
                    "stratify splits (default on)");
    sweep->add_option("--n", sweep_n, "generated dataset size (total points)");
    sweep->add_option("--config", config_path, "config file");
    add_method_flags(sweep, sweep_flags, /*with_swept_flags=*/false);

    std::vector<const char*> argv2;
    argv2.push_back(argv[0]);
    for (const auto& a : args) argv2.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_family, gen_n, gen_d, gen_seed, gen_noise, gen_out);
        if (fit->parsed())
            return cmd_fit(fit_method, fit_train, fit_label, fit_flags, fit_seed, fit_out);
        if (predict->parsed()) return cmd_predict(pred_model, pred_data, pred_label, pred_out);
        if (bench_cmd->parsed()) {
            bench_seed_given = bseed->count() > 0;
            if (!bench_seed_given) {
                std::cerr << "error: bench requires --seed for reproducibility\n";
                return 1;
            }
            return cmd_bench(bench_methods, bench_families, bench_dataset, bench_label,
                             bench_runs, bench_seed, bench_fraction, bench_stratified,
                             bench_n, bench_flags, bench_out, bench_threads);
        }
        if (sweep->parsed()) {
            if (sseed->count() == 0) {
                std::cerr << "error: sweep requires --seed for reproducibility\n";
                return 1;
            }
            return cmd_sweep(sweep_method, sweep_c, sweep_pc, sweep_families, sweep_dataset,
                             sweep_label, sweep_runs, sweep_seed, sweep_fraction,
                             sweep_stratified, sweep_n, sweep_flags, sweep_out,
                             sweep_threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
