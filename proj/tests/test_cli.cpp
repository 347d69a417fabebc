// Drives the installed CLI binary end to end through a shell. The binary
// path comes from the build system (CLASSLAB_CLI_PATH).

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "classlab/dataset.hpp"

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CLASSLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    CommandResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    while (fgets(buffer.data(), buffer.size(), pipe)) result.output += buffer.data();
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "classlab_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, GenWritesCsvAndSidecar) {
    const auto out = work_dir() / "ds1.csv";
    fs::remove(out);
    fs::remove(classlab::sidecar_path(out.string()));
    const auto result =
        run_cli("gen --family ds1 --n 500 --seed 7 --out " + out.string());
    EXPECT_EQ(result.exit_code, 0);
    ASSERT_TRUE(fs::exists(out));
    ASSERT_TRUE(fs::exists(classlab::sidecar_path(out.string())));
    const auto ds = classlab::load_csv(out.string(), "label");
    EXPECT_EQ(ds.n_rows(), 500u);
    EXPECT_EQ(ds.n_features(), 2u);
}

TEST(Cli, FitAndPredictRoundTrip) {
    const auto dir = work_dir();
    const auto data = dir / "train.csv";
    const auto model = dir / "model.json";
    ASSERT_EQ(run_cli("gen --family ds1 --n 200 --seed 3 --out " + data.string()).exit_code, 0);

    const auto fit = run_cli("fit --method cart --train " + data.string() + " --out " +
                             model.string());
    EXPECT_EQ(fit.exit_code, 0);
    ASSERT_TRUE(fs::exists(model));

    const auto preds = dir / "preds.csv";
    const auto predict = run_cli("predict --model " + model.string() + " --data " +
                                 data.string() + " --out " + preds.string());
    EXPECT_EQ(predict.exit_code, 0);
    ASSERT_TRUE(fs::exists(preds));
    std::ifstream in(preds);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "row,prediction");
}

TEST(Cli, FitNldtEmitsRuleDump) {
    const auto dir = work_dir();
    const auto data = dir / "nldt_train.csv";
    ASSERT_EQ(run_cli("gen --family ds1 --n 120 --seed 5 --out " + data.string()).exit_code, 0);
    const auto model = dir / "nldt_model.json";
    const auto fit = run_cli("fit --method nldt --train " + data.string() +
                             " --tau-i 0.05 --upper-gens 10 --lower-gens 20 --out " +
                             model.string());
    EXPECT_EQ(fit.exit_code, 0);
    EXPECT_NE(fit.output.find("if "), std::string::npos);
    EXPECT_NE(fit.output.find("class "), std::string::npos);
    ASSERT_TRUE(fs::exists(model));
    nlohmann::json j;
    std::ifstream(model) >> j;
    EXPECT_EQ(j.at("method"), "nldt");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli("").exit_code, 1);                       // missing subcommand
    EXPECT_EQ(run_cli("gen").exit_code, 1);                    // missing required flag
    EXPECT_EQ(run_cli("frobnicate --x 1").exit_code, 1);       // unknown subcommand
    EXPECT_EQ(run_cli("gen --family ds1 --bogus 1 --out /tmp/x.csv").exit_code, 1);
}

TEST(Cli, RuntimeErrors) {
    EXPECT_EQ(run_cli("gen --family ds9 --out /tmp/x.csv").exit_code, 2);  // unknown family
    EXPECT_EQ(run_cli("predict --model /nonexistent.json --data /nonexistent.csv").exit_code,
              2);
    EXPECT_EQ(run_cli("fit --method cart --train /nonexistent.csv").exit_code, 2);
}

TEST(Cli, BenchRequiresSeed) {
    const auto result = run_cli("bench --methods cart --families ds1 --runs 2");
    EXPECT_EQ(result.exit_code, 1);
}

TEST(Cli, BenchWritesResultsDirectory) {
    const auto dir = work_dir() / "bench_out";
    fs::remove_all(dir);
    const auto result = run_cli(
        "bench --methods cart,svm --families ds1 --runs 3 --seed 11 --out-dir " +
        dir.string());
    EXPECT_EQ(result.exit_code, 0);
    EXPECT_TRUE(fs::exists(dir / "runs.csv"));
    EXPECT_TRUE(fs::exists(dir / "summary.md"));
    EXPECT_TRUE(fs::exists(dir / "summary.csv"));
    EXPECT_TRUE(fs::exists(dir / "spec.json"));
    EXPECT_NE(result.output.find("accuracy"), std::string::npos);
}

TEST(Cli, SweepEmitsParameterColumns) {
    const auto dir = work_dir() / "sweep_out";
    fs::remove_all(dir);
    const auto result = run_cli(
        "sweep --method svm --c 1,1000 --families ds1 --runs 3 --seed 13 --out-dir " +
        dir.string());
    EXPECT_EQ(result.exit_code, 0);
    EXPECT_NE(result.output.find("C=1"), std::string::npos);
    EXPECT_NE(result.output.find("C=1000"), std::string::npos);
}

TEST(Cli, FitGpWritesGenerationStats) {
    const auto dir = work_dir();
    const auto data = dir / "gp_train.csv";
    ASSERT_EQ(run_cli("gen --family ds1 --n 80 --seed 9 --out " + data.string()).exit_code, 0);
    const auto model = dir / "gp_model.json";
    const auto fit = run_cli("fit --method gp --train " + data.string() +
                             " --population 50 --generations 5 --out " + model.string());
    EXPECT_EQ(fit.exit_code, 0);
    ASSERT_TRUE(fs::exists(model));
    const auto gens = model.string() + ".generations.csv";
    ASSERT_TRUE(fs::exists(gens));
    std::ifstream in(gens);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "generation,best_fitness,best_loss,best_size,mean_fitness");
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 6);  // initial population + 5 generations
}

TEST(Cli, ResultsRootEnvVariable) {
    const auto root = work_dir() / "env_results_root";
    fs::remove_all(root);
    const std::string cmd =
        "CLASSLAB_RESULTS_ROOT=" + root.string() + " " + std::string(CLASSLAB_CLI_PATH) +
        " bench --methods cart --families ds1 --runs 2 --seed 21 >/dev/null 2>&1";
    ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    EXPECT_TRUE(fs::exists(root / "bench" / "summary.md"));
}

TEST(Cli, ConfigFileFlagsWithFlagPrecedence) {
    const auto dir = work_dir();
    const auto cfg = dir / "gen.cfg";
    {
        std::ofstream out(cfg);
        out << "family = ds1\n";
        out << "n = 100\n";
        out << "seed = 4\n";
    }
    const auto out_a = dir / "cfg_a.csv";
    const auto a = run_cli("gen --config " + cfg.string() + " --out " + out_a.string());
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(classlab::load_csv(out_a.string(), "label").n_rows(), 100u);

    // command-line flag wins over the config value
    const auto out_b = dir / "cfg_b.csv";
    const auto b =
        run_cli("gen --config " + cfg.string() + " --n 60 --out " + out_b.string());
    EXPECT_EQ(b.exit_code, 0);
    EXPECT_EQ(classlab::load_csv(out_b.string(), "label").n_rows(), 60u);
}
