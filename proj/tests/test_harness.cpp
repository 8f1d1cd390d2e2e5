#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xcfb/config_file.hpp"
#include "xcfb/errors.hpp"
#include "xcfb/experiment.hpp"

using namespace xcfb;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("xcfb_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("key-value config parsing") {
    const auto kv = KeyValueConfig::from_string(
        "# comment line\n"
        "scheme = x2_mimo\n"
        "M = 2   # trailing comment\n"
        "N = 3\n"
        "p_grid_db = 30, 40, 50\n"
        "\n");
    CHECK(kv.get_string("scheme") == "x2_mimo");
    CHECK(kv.get_int("M") == 2);
    CHECK(kv.get_double_list("p_grid_db") == std::vector<double>{30.0, 40.0, 50.0});
    CHECK(kv.get_int_or("missing", 7) == 7);
    CHECK_THROWS_AS(kv.get_string("missing"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::from_string("no equals sign here\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::from_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("experiment config validation catches bad parameters") {
    const auto base = KeyValueConfig::from_string("scheme = x2_mimo\nM = 2\nN = 3\n");
    CHECK_NOTHROW(ExperimentConfig::from_kv(base));
    CHECK_THROWS_AS(ExperimentConfig::from_kv(KeyValueConfig::from_string("scheme = bogus\n")),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_kv(KeyValueConfig::from_string("scheme = x2_mimo\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        ExperimentConfig::from_kv(KeyValueConfig::from_string("scheme = kx_partial\nK = 1\n")),
        ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_kv(KeyValueConfig::from_string(
                        "scheme = x2_mimo\nM = 2\nN = 3\nmode = snr_sweep\n")),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_kv(KeyValueConfig::from_string(
                        "scheme = x2_mimo\nM = 2\nN = 3\ntrials = 0\n")),
                    ConfigError);
}

TEST_CASE("rank_verify experiment reports the exact ratio and full rank pass") {
    ExperimentConfig cfg;
    cfg.scheme = SchemeKind::X2Mimo;
    cfg.m = 2;
    cfg.n = 3;
    cfg.mode = RunMode::RankVerify;
    cfg.trials = 25;
    cfg.master_seed = 99;
    const ExperimentResult res = run_experiment(cfg, 2);
    CHECK(res.passed);
    CHECK(res.report.ratio.str() == "24/7");
    CHECK(res.report.rank_pass == 1.0);
    CHECK(res.report.symbols == 24);
    CHECK(res.report.slots == 7);
}

TEST_CASE("noiseless_decode experiment decodes every trial") {
    ExperimentConfig cfg;
    cfg.scheme = SchemeKind::KxPartial;
    cfg.k = 3;
    cfg.mode = RunMode::NoiselessDecode;
    cfg.trials = 25;
    cfg.master_seed = 7;
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.passed);
    CHECK(res.report.symbols == 9);
    CHECK(res.report.slots == 6);
}

TEST_CASE("experiment output files are byte-identical across worker counts") {
    const auto dir = temp_dir("jobs");
    ExperimentConfig cfg;
    cfg.scheme = SchemeKind::KIc;
    cfg.k = 2;
    cfg.mode = RunMode::SnrSweep;
    cfg.p_grid_db = {30.0, 40.0, 50.0};
    cfg.trials = 8;
    cfg.master_seed = 5;
    cfg.output_prefix = (dir / "one/run").string();
    const auto res1 = run_experiment(cfg, 1);
    cfg.output_prefix = (dir / "eight/run").string();
    const auto res8 = run_experiment(cfg, 8);
    REQUIRE(res1.files_written.size() == res8.files_written.size());
    for (std::size_t i = 0; i < res1.files_written.size(); ++i)
        CHECK(slurp(res1.files_written[i]) == slurp(res8.files_written[i]));
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep experiment writes trial, summary and plot files") {
    const auto dir = temp_dir("files");
    ExperimentConfig cfg;
    cfg.scheme = SchemeKind::X2Mimo;
    cfg.m = 1;
    cfg.n = 1;
    cfg.mode = RunMode::SnrSweep;
    cfg.p_grid_db = {30.0, 40.0, 50.0, 60.0};
    cfg.trials = 6;
    cfg.master_seed = 11;
    cfg.output_prefix = (dir / "c11").string();
    const auto res = run_experiment(cfg);
    REQUIRE(res.files_written.size() == 3);
    const std::string csv = slurp(res.files_written[0]);
    CHECK(csv.find("trial,seed,rank_margin,decode_exact,rate_30dB,rate_40dB,rate_50dB,rate_60dB") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 trials
    const std::string summary = slurp(res.files_written[1]);
    CHECK(summary.find("ratio = 4/3") != std::string::npos);
    CHECK(summary.find("slope = ") != std::string::npos);
    const std::string plot = slurp(res.files_written[2]);
    CHECK(plot.find("log2_power,mean_sum_rate") == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("relative output prefixes honor XCFB_OUTPUT_DIR") {
    setenv("XCFB_OUTPUT_DIR", "/tmp/xcfb_base", 1);
    CHECK(resolve_output_prefix("runs/a") == "/tmp/xcfb_base/runs/a");
    CHECK(resolve_output_prefix("/abs/path") == "/abs/path");
    unsetenv("XCFB_OUTPUT_DIR");
    CHECK(resolve_output_prefix("runs/a") == "runs/a");
}

TEST_CASE("predicted DoF dispatch matches the scheme formulas") {
    ExperimentConfig cfg;
    cfg.scheme = SchemeKind::KxGlobal;
    cfg.k = 4;
    CHECK(cfg.predicted_dof() == Rational(48, 25));
    cfg.scheme = SchemeKind::KIc;
    cfg.k = 2;
    CHECK(cfg.predicted_dof() == Rational(4, 5));
    cfg.scheme = SchemeKind::MatBc;
    cfg.k = 3;
    CHECK(cfg.predicted_dof() == Rational(18, 11));
}
