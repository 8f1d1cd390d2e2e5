#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "xcfb/analysis.hpp"
#include "xcfb/experiment.hpp"
#include "xcfb/ic_scheme.hpp"
#include "xcfb/kx_scheme.hpp"
#include "xcfb/mat_scheme.hpp"
#include "xcfb/verify.hpp"
#include "xcfb/x2_scheme.hpp"

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_set, int jobs) {
    xcfb::ExperimentConfig cfg = xcfb::ExperimentConfig::from_file(config_path);
    if (seed_set) cfg.master_seed = seed;
    const xcfb::ExperimentResult result = xcfb::run_experiment(cfg, jobs);
    std::cout << xcfb::scheme_name(cfg.scheme) << ": " << result.report.symbols << " symbols / "
              << result.report.slots << " slots = " << result.report.ratio << " (predicted "
              << result.report.predicted << ")\n";
    std::cout << (result.passed ? "PASS" : "FAIL") << ": " << result.detail << "\n";
    for (const auto& f : result.files_written) std::cout << "wrote " << f << "\n";
    return result.passed ? 0 : 1;
}

int cmd_formulas(const std::string& scheme, int m, int n, int k) {
    using xcfb::Rational;
    if (scheme == "x2_mimo") {
        const Rational dof = xcfb::x2_sum_dof(m, n);
        const xcfb::X2Plan plan = xcfb::select_regime(m, n);
        std::cout << dof << "\n";
        std::cout << "regime " << (plan.regime == xcfb::X2Regime::A ? "A" : plan.regime == xcfb::X2Regime::B ? "B" : "C");
        std::cout << ", phases";
        for (int p : plan.phase_lengths) std::cout << " " << p;
        std::cout << ", " << plan.symbols_per_message << " symbols per message\n";

        // Outer-bound table at the achieved quadruple.
        const Rational quarter = dof / Rational(4);
        const bool mac_corner = 2 * m <= n;
        const Rational d11 = mac_corner ? Rational(m) : quarter;
        const Rational d12 = mac_corner ? Rational(0) : quarter;
        const Rational d22 = mac_corner ? Rational(0) : quarter;
        const Rational d21 = mac_corner ? Rational(m) : quarter;
        const auto ob = xcfb::outer_bound_ok(d11, d12, d22, d21, m, n);
        std::cout << "quad (" << d11 << ", " << d12 << ", " << d22 << ", " << d21 << ")\n";
        std::cout << "bound 1: (d11+d21)/" << std::min(2 * m, 2 * n) << " + (d22+d12)/" << std::min(2 * m, n)
                  << " <= 1, slack " << ob.slack1 << "\n";
        std::cout << "bound 2: (d11+d21)/" << std::min(2 * m, n) << " + (d22+d12)/" << std::min(2 * m, 2 * n)
                  << " <= 1, slack " << ob.slack2 << "\n";
        return 0;
    }
    if (scheme == "kx_partial") {
        std::cout << xcfb::kx_plan(k, xcfb::KxMode::PartialFB).predicted_dof << "\n";
        return 0;
    }
    if (scheme == "kx_global") {
        std::cout << xcfb::kx_plan(k, xcfb::KxMode::GlobalFB).predicted_dof << "\n";
        return 0;
    }
    if (scheme == "mat_bc") {
        const xcfb::MatPlan plan = xcfb::mat_plan(k);
        std::cout << plan.dof << "\n";
        std::cout << plan.total_order1_symbols << " symbols / " << plan.total_slots
                  << " slots, replication " << plan.replication << ", phase slots";
        for (int s : plan.slots_per_phase) std::cout << " " << s;
        std::cout << "\n";
        return 0;
    }
    if (scheme == "k_ic") {
        std::cout << xcfb::ic_plan(k).predicted_dof << "\n";
        return 0;
    }
    std::cerr << "unknown scheme: " << scheme << "\n";
    return 2;
}

int cmd_verify_all(std::uint64_t seed, int jobs, const std::string& out_dir) {
    const std::string resolved = xcfb::resolve_output_prefix(out_dir);
    const auto results = xcfb::run_acceptance(seed, jobs, resolved);
    std::cout << xcfb::format_results(results);
    std::ofstream summary(std::filesystem::path(resolved) / "verify_all.txt");
    summary << xcfb::format_results(results);
    const bool ok = xcfb::all_passed(results);
    std::cout << (ok ? "all criteria passed" : "FAILURES present") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and DoF verifier for feedback / delayed-CSI X- and interference-channel schemes"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 42;
    int jobs = 1;
    bool seed_set = false;

    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    run->add_option("config", config_path, "flat key = value config file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "master seed override");
    run->add_option("--jobs", jobs, "worker count (results are jobs-independent)");

    std::string scheme;
    int m = 1, n = 1, k = 1;
    auto* formulas = app.add_subcommand("formulas", "Print exact DoF values and outer bounds");
    formulas->add_option("--scheme", scheme, "x2_mimo | kx_partial | kx_global | mat_bc | k_ic")
        ->required();
    formulas->add_option("-M,--tx-antennas", m, "transmit antennas (x2_mimo)");
    formulas->add_option("-N,--rx-antennas", n, "receive antennas (x2_mimo)");
    formulas->add_option("-K,--users", k, "user count (K-user schemes)");

    std::string out_dir = "xcfb_out";
    auto* verify = app.add_subcommand("verify-all", "Run the full verification matrix");
    verify->add_option("--seed", seed, "master seed");
    verify->add_option("--jobs", jobs, "worker count");
    verify->add_option("--out", out_dir, "output directory for result files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            seed_set = seed_opt->count() > 0;
            return cmd_run(config_path, seed, seed_set, jobs);
        }
        if (formulas->parsed()) return cmd_formulas(scheme, m, n, k);
        if (verify->parsed()) return cmd_verify_all(seed, jobs, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
