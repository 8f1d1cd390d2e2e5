#include "xcfb/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "xcfb/errors.hpp"
#include "xcfb/ic_scheme.hpp"
#include "xcfb/kx_scheme.hpp"
#include "xcfb/mat_scheme.hpp"
#include "xcfb/x2_scheme.hpp"

namespace xcfb {
namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void parallel_trials(int trials, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) body(t);
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

std::string scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::X2Mimo: return "x2_mimo";
        case SchemeKind::KxPartial: return "kx_partial";
        case SchemeKind::KxGlobal: return "kx_global";
        case SchemeKind::MatBc: return "mat_bc";
        case SchemeKind::KIc: return "k_ic";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_kv(KeyValueConfig::from_file(path));
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValueConfig& kv) {
    ExperimentConfig cfg;
    const std::string scheme = kv.get_string("scheme");
    if (scheme == "x2_mimo") cfg.scheme = SchemeKind::X2Mimo;
    else if (scheme == "kx_partial") cfg.scheme = SchemeKind::KxPartial;
    else if (scheme == "kx_global") cfg.scheme = SchemeKind::KxGlobal;
    else if (scheme == "mat_bc") cfg.scheme = SchemeKind::MatBc;
    else if (scheme == "k_ic") cfg.scheme = SchemeKind::KIc;
    else throw ConfigError("unknown scheme: " + scheme);

    cfg.m = static_cast<int>(kv.get_int_or("M", 0));
    cfg.n = static_cast<int>(kv.get_int_or("N", 0));
    cfg.k = static_cast<int>(kv.get_int_or("K", 0));
    cfg.rounds = static_cast<int>(kv.get_int_or("rounds", 1));

    const std::string mode = kv.get_string_or("mode", "rank_verify");
    if (mode == "rank_verify") cfg.mode = RunMode::RankVerify;
    else if (mode == "noiseless_decode") cfg.mode = RunMode::NoiselessDecode;
    else if (mode == "snr_sweep") cfg.mode = RunMode::SnrSweep;
    else throw ConfigError("unknown mode: " + mode);

    cfg.power = kv.get_double_or("power", 100.0);
    if (kv.has("p_grid_db")) cfg.p_grid_db = kv.get_double_list("p_grid_db");
    cfg.trials = static_cast<int>(kv.get_int_or("trials", 100));
    cfg.master_seed = kv.get_u64_or("master_seed", 42);
    cfg.output_prefix = kv.get_string_or("output_prefix", "");
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (power <= 0.0) throw ConfigError("power must be > 0");
    switch (scheme) {
        case SchemeKind::X2Mimo:
            if (m < 1 || n < 1) throw ConfigError("x2_mimo needs M >= 1 and N >= 1");
            break;
        case SchemeKind::KxPartial:
            if (k < 2) throw ConfigError("kx_partial needs K >= 2");
            break;
        case SchemeKind::KxGlobal:
        case SchemeKind::MatBc:
            if (k < 1) throw ConfigError(scheme_name(scheme) + " needs K >= 1");
            break;
        case SchemeKind::KIc:
            if (k < 2) throw ConfigError("k_ic needs K >= 2");
            break;
    }
    if (mode == RunMode::SnrSweep) {
        if (p_grid_db.size() < 2) throw ConfigError("snr_sweep needs p_grid_db with >= 2 entries");
        if (!std::is_sorted(p_grid_db.begin(), p_grid_db.end()))
            throw ConfigError("p_grid_db must be ascending");
    }
    if (rounds < 1) throw ConfigError("rounds must be >= 1");
}

Rational ExperimentConfig::predicted_dof() const {
    switch (scheme) {
        case SchemeKind::X2Mimo: return x2_sum_dof(m, n);
        case SchemeKind::KxPartial: return Rational(2LL * k, k + 1);
        case SchemeKind::KxGlobal: return Rational(k) / Rational::harmonic(k);
        case SchemeKind::MatBc: return Rational(k) / Rational::harmonic(k);
        case SchemeKind::KIc: return Rational(k) / (Rational(1) + Rational::harmonic(k));
    }
    throw ConfigError("unreachable");
}

Transcript ExperimentConfig::run_once(double p, bool noiseless, std::uint64_t seed) const {
    switch (scheme) {
        case SchemeKind::X2Mimo: return run_x2(m, n, p, noiseless, seed);
        case SchemeKind::KxPartial: return run_kx(k, KxMode::PartialFB, p, noiseless, seed);
        case SchemeKind::KxGlobal: return run_kx(k, KxMode::GlobalFB, p, noiseless, seed);
        case SchemeKind::MatBc: return run_mat_standalone(k, rounds, p, noiseless, seed);
        case SchemeKind::KIc: return run_ic(k, p, noiseless, seed);
    }
    throw ConfigError("unreachable");
}

std::string resolve_output_prefix(const std::string& prefix) {
    if (prefix.empty()) return prefix;
    std::filesystem::path p(prefix);
    if (p.is_relative()) {
        if (const char* base = std::getenv("XCFB_OUTPUT_DIR"); base != nullptr && *base != '\0')
            p = std::filesystem::path(base) / p;
    }
    return p.string();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
    cfg.validate();
    ExperimentResult result;
    result.report.scheme = scheme_name(cfg.scheme);
    result.report.predicted = cfg.predicted_dof();

    // One deterministic reference run pins the slot/symbol accounting.
    {
        const Transcript ref = cfg.run_once(cfg.power, true, Rng::split(cfg.master_seed, 0));
        result.report.symbols = ref.total_symbols();
        result.report.slots = ref.total_slots();
        result.report.ratio = ref.ratio();
    }

    struct TrialRow {
        std::uint64_t seed = 0;
        double rank_margin = 0.0;
        bool rank_ok = false;
        bool decode_exact = false;
        std::vector<double> rates;
    };
    std::vector<TrialRow> rows(static_cast<std::size_t>(cfg.trials));

    const bool noiseless = cfg.mode == RunMode::NoiselessDecode;
    std::vector<double> powers;
    if (cfg.mode == RunMode::SnrSweep)
        for (double db : cfg.p_grid_db) powers.push_back(std::pow(10.0, db / 10.0));

    parallel_trials(cfg.trials, jobs, [&](int trial) {
        TrialRow& row = rows[static_cast<std::size_t>(trial)];
        row.seed = Rng::split(cfg.master_seed, static_cast<std::uint64_t>(trial));
        if (cfg.mode == RunMode::SnrSweep) {
            row.rank_ok = true;
            row.decode_exact = true;
            row.rank_margin = 1.0;
            // Common random numbers across the grid: the same draws at every
            // power, so per-trial offsets cancel out of the slope.
            for (double p : powers) {
                const Transcript tr = cfg.run_once(p, false, row.seed);
                row.rates.push_back(sum_rate(tr));
            }
            return;
        }
        const Transcript tr = cfg.run_once(cfg.power, noiseless, row.seed);
        const auto verdicts = verify_decodability(tr);
        row.rank_ok = true;
        row.decode_exact = true;
        row.rank_margin = 1.0;
        for (const auto& v : verdicts) {
            row.rank_ok = row.rank_ok && v.rank_ok;
            row.decode_exact = row.decode_exact && v.decode_exact;
            row.rank_margin = std::min(row.rank_margin, v.rank_margin);
        }
    });

    int rank_passes = 0;
    int decode_passes = 0;
    for (const auto& row : rows) {
        rank_passes += row.rank_ok ? 1 : 0;
        decode_passes += row.decode_exact ? 1 : 0;
    }
    result.report.rank_pass = static_cast<double>(rank_passes) / cfg.trials;

    std::vector<double> mean_rates;
    if (cfg.mode == RunMode::SnrSweep) {
        mean_rates.assign(powers.size(), 0.0);
        for (const auto& row : rows)
            for (std::size_t pi = 0; pi < powers.size(); ++pi) mean_rates[pi] += row.rates[pi];
        for (auto& m : mean_rates) m /= cfg.trials;
        result.report.slope = fit_top_half_slope(powers, mean_rates);
    }

    const Rational predicted = result.report.predicted;
    const bool ratio_ok = result.report.ratio == predicted;
    std::ostringstream detail;
    switch (cfg.mode) {
        case RunMode::RankVerify:
            result.passed = ratio_ok && rank_passes == cfg.trials;
            detail << "ratio " << result.report.ratio << (ratio_ok ? " == " : " != ") << predicted
                   << ", rank pass " << rank_passes << "/" << cfg.trials;
            break;
        case RunMode::NoiselessDecode:
            result.passed = ratio_ok && rank_passes == cfg.trials && decode_passes == cfg.trials;
            detail << "ratio " << result.report.ratio << (ratio_ok ? " == " : " != ") << predicted
                   << ", rank pass " << rank_passes << "/" << cfg.trials << ", exact decode "
                   << decode_passes << "/" << cfg.trials;
            break;
        case RunMode::SnrSweep: {
            const double slope = *result.report.slope;
            const double target = predicted.to_double();
            const bool slope_ok = std::abs(slope - target) <= 0.1 * target;
            result.passed = ratio_ok && slope_ok;
            detail << "slope " << fmt_double(slope) << " vs DoF " << predicted << " ("
                   << fmt_double(std::abs(slope - target) / target * 100.0) << "% off)";
            break;
        }
    }
    result.detail = detail.str();

    if (!cfg.output_prefix.empty()) {
        const std::string prefix = resolve_output_prefix(cfg.output_prefix);
        const std::filesystem::path parent = std::filesystem::path(prefix).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);

        const std::string trials_path = prefix + "_trials.csv";
        std::ofstream csv(trials_path);
        csv << "trial,seed,rank_margin,decode_exact";
        for (double db : cfg.p_grid_db) csv << ",rate_" << fmt_double(db) << "dB";
        csv << "\n";
        for (std::size_t t = 0; t < rows.size(); ++t) {
            const auto& row = rows[t];
            csv << t << "," << row.seed << ",";
            if (cfg.mode == RunMode::SnrSweep) {
                csv << ",";
            } else {
                csv << fmt_double(row.rank_margin) << ","
                    << (cfg.mode == RunMode::NoiselessDecode ? (row.decode_exact ? "1" : "0") : "");
            }
            for (double r : row.rates) csv << "," << fmt_double(r);
            csv << "\n";
        }
        csv.close();
        result.files_written.push_back(trials_path);

        const std::string summary_path = prefix + "_summary.txt";
        std::ofstream summary(summary_path);
        summary << "scheme = " << result.report.scheme << "\n";
        if (cfg.scheme == SchemeKind::X2Mimo) summary << "M = " << cfg.m << "\nN = " << cfg.n << "\n";
        else summary << "K = " << cfg.k << "\n";
        summary << "mode = "
                << (cfg.mode == RunMode::RankVerify
                        ? "rank_verify"
                        : cfg.mode == RunMode::NoiselessDecode ? "noiseless_decode" : "snr_sweep")
                << "\n";
        summary << "trials = " << cfg.trials << "\n";
        summary << "master_seed = " << cfg.master_seed << "\n";
        summary << "symbols = " << result.report.symbols << "\n";
        summary << "slots = " << result.report.slots << "\n";
        summary << "ratio = " << result.report.ratio << "\n";
        summary << "predicted = " << result.report.predicted << "\n";
        summary << "rank_pass = " << fmt_double(result.report.rank_pass) << "\n";
        if (result.report.slope) summary << "slope = " << fmt_double(*result.report.slope) << "\n";
        summary << "passed = " << (result.passed ? "1" : "0") << "\n";
        summary.close();
        result.files_written.push_back(summary_path);

        if (cfg.mode == RunMode::SnrSweep) {
            const std::string plot_path = prefix + "_plot.csv";
            std::ofstream plot(plot_path);
            plot << "log2_power,mean_sum_rate\n";
            for (std::size_t pi = 0; pi < powers.size(); ++pi)
                plot << fmt_double(std::log2(powers[pi])) << "," << fmt_double(mean_rates[pi]) << "\n";
            plot.close();
            result.files_written.push_back(plot_path);
        }
    }
    return result;
}

}  // namespace xcfb
