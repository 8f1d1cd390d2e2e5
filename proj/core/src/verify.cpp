#include "xcfb/verify.hpp"

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xcfb/analysis.hpp"
#include "xcfb/errors.hpp"
#include "xcfb/experiment.hpp"
#include "xcfb/ic_scheme.hpp"
#include "xcfb/kx_scheme.hpp"
#include "xcfb/mat_scheme.hpp"
#include "xcfb/x2_scheme.hpp"

namespace xcfb {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// DoF quadruple (d11, d12, d22, d21) the scheme achieves at (M, N).
std::array<Rational, 4> achieved_quad(int m, int n) {
    const X2Plan plan = select_regime(m, n);
    switch (plan.regime) {
        case X2Regime::A:
            return {Rational(m), Rational(0), Rational(0), Rational(m)};
        case X2Regime::B: {
            const Rational d(static_cast<std::int64_t>(m) * n, 2LL * m + n);
            return {d, d, d, d};
        }
        case X2Regime::C: {
            const Rational d(n, 3);
            return {d, d, d, d};
        }
    }
    throw DomainError("achieved_quad: unreachable");
}

CriterionResult criterion_dof_table(std::uint64_t seed) {
    const auto start = Clock::now();
    CriterionResult res{1, "Two-user sum-DoF table: executed ratio equals the piecewise formula for M,N in 1..8", false, "", 0.0};
    std::ostringstream detail;
    bool ok = true;
    for (int m = 1; m <= 8 && ok; ++m) {
        for (int n = 1; n <= 8 && ok; ++n) {
            const Transcript tr = run_x2(m, n, 100.0, true, Rng::split(seed, m * 100 + n));
            const Rational expect = x2_sum_dof(m, n);
            if (tr.ratio() != expect) {
                ok = false;
                detail << "(" << m << "," << n << ") ran at " << tr.ratio() << ", formula " << expect;
            }
        }
    }
    res.seconds = seconds_since(start);
    if (ok && res.seconds >= 1.0) {
        ok = false;
        detail << "runtime " << res.seconds << "s exceeds 1s budget";
    }
    if (ok) detail << "64 configurations, exact match, " << res.seconds << "s";
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion_worked_example(std::uint64_t seed) {
    const auto start = Clock::now();
    CriterionResult res{2, "Worked example M=2, N=3: phases [3,3,1], 9x12 system, 3 side-info, 24/7", false, "", 0.0};
    std::ostringstream detail;
    X2Internals side;
    const Transcript tr = run_x2(2, 3, 100.0, true, Rng::split(seed, 23), &side);
    bool ok = true;

    if (tr.phase_lengths != std::vector<int>{3, 3, 1}) {
        ok = false;
        detail << "phase lengths off; ";
    }
    // Receiver 1's phase-1 stack: 9 equations in the 12 u-symbols.
    std::vector<LinExpr> phase1_rows;
    for (int slot = 1; slot <= 3; ++slot)
        for (int a = 0; a < 3; ++a) phase1_rows.push_back(tr.slots[static_cast<std::size_t>(slot - 1)].received[0][static_cast<std::size_t>(a)]);
    const auto sys = coefficient_matrix(phase1_rows, tr.desired[0]);
    if (sys.matrix.rows != 9 || sys.matrix.cols != 12) {
        ok = false;
        detail << "phase-1 system is " << sys.matrix.rows << "x" << sys.matrix.cols << "; ";
    }
    for (const auto& resid : sys.residual)
        if (!resid.empty()) {
            ok = false;
            detail << "phase-1 rows touch non-u symbols; ";
            break;
        }
    if (side.u_tilde_native.size() != 3 || side.v_tilde_native.size() != 3) {
        ok = false;
        detail << "side-info sizes " << side.u_tilde_native.size() << "/" << side.v_tilde_native.size() << "; ";
    }
    if (tr.ratio() != Rational(24, 7)) {
        ok = false;
        detail << "ratio " << tr.ratio() << " != 24/7; ";
    }
    if (ok)
        detail << "phases [3,3,1], 9x12 u-system, 3 side-info symbols per receiver, ratio 24/7";
    res.passed = ok;
    res.detail = detail.str();
    res.seconds = seconds_since(start);
    return res;
}

struct RankConfig {
    ExperimentConfig cfg;
    std::string tag;
};

std::vector<RankConfig> rank_matrix(std::uint64_t seed, const std::string& out_dir) {
    std::vector<RankConfig> items;
    auto add_x2 = [&](int m, int n) {
        ExperimentConfig cfg;
        cfg.scheme = SchemeKind::X2Mimo;
        cfg.m = m;
        cfg.n = n;
        cfg.mode = RunMode::NoiselessDecode;
        cfg.trials = 100;
        cfg.master_seed = Rng::split(seed, items.size() + 300);
        cfg.output_prefix = out_dir + "/c3_x2_" + std::to_string(m) + "_" + std::to_string(n);
        items.push_back({cfg, "x2(" + std::to_string(m) + "," + std::to_string(n) + ")"});
    };
    auto add_k = [&](SchemeKind kind, int k) {
        ExperimentConfig cfg;
        cfg.scheme = kind;
        cfg.k = k;
        cfg.mode = RunMode::NoiselessDecode;
        cfg.trials = 100;
        cfg.master_seed = Rng::split(seed, items.size() + 300);
        cfg.output_prefix = out_dir + "/c3_" + scheme_name(kind) + "_" + std::to_string(k);
        items.push_back({cfg, scheme_name(kind) + "(K=" + std::to_string(k) + ")"});
    };
    add_x2(1, 2);
    add_x2(2, 5);
    add_x2(2, 3);
    add_x2(3, 3);
    add_x2(2, 2);
    add_x2(2, 1);
    add_x2(3, 2);
    for (int k = 2; k <= 5; ++k) add_k(SchemeKind::KxPartial, k);
    for (int k = 2; k <= 4; ++k) add_k(SchemeKind::KxGlobal, k);
    for (int k = 2; k <= 4; ++k) add_k(SchemeKind::MatBc, k);
    for (int k = 2; k <= 4; ++k) add_k(SchemeKind::KIc, k);
    return items;
}

CriterionResult criterion_rank_matrix(std::uint64_t seed, int jobs, const std::string& out_dir) {
    const auto start = Clock::now();
    CriterionResult res{3, "Rank verification + exact noiseless decode, 100 trials per scheme", false, "", 0.0};
    std::ostringstream detail;
    bool ok = true;
    for (const auto& item : rank_matrix(seed, out_dir)) {
        const ExperimentResult r = run_experiment(item.cfg, jobs);
        if (!r.passed) {
            ok = false;
            detail << item.tag << ": " << r.detail << "; ";
        }
    }
    res.seconds = seconds_since(start);
    if (ok && res.seconds >= 30.0) {
        ok = false;
        detail << "runtime " << res.seconds << "s exceeds 30s budget";
    }
    if (ok) detail << "16 configurations x 100 trials, all full rank and exact, "
                   << res.seconds << "s";
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion_counts(std::uint64_t seed) {
    const auto start = Clock::now();
    CriterionResult res{4, "K-user slot counts: 18/11, 9/6, 4/3, 4/5, 18/17", false, "", 0.0};
    std::ostringstream detail;
    bool ok = true;
    auto check = [&](const Transcript& tr, long long symbols, long long slots, const Rational& dof,
                     const std::string& tag) {
        if (tr.total_symbols() != symbols || tr.total_slots() != slots || tr.ratio() != dof) {
            ok = false;
            detail << tag << ": got " << tr.total_symbols() << "/" << tr.total_slots() << "; ";
        }
    };
    check(run_kx(3, KxMode::GlobalFB, 100.0, true, Rng::split(seed, 41)), 18, 11, Rational(18, 11),
          "global K=3");
    check(run_kx(3, KxMode::PartialFB, 100.0, true, Rng::split(seed, 42)), 9, 6, Rational(3, 2),
          "partial K=3");
    check(run_kx(2, KxMode::PartialFB, 100.0, true, Rng::split(seed, 43)), 4, 3, Rational(4, 3),
          "partial K=2");
    check(run_ic(2, 100.0, true, Rng::split(seed, 44)), 4, 5, Rational(4, 5), "IC K=2");
    check(run_ic(3, 100.0, true, Rng::split(seed, 45)), 18, 17, Rational(18, 17), "IC K=3");
    if (ok) detail << "all exact";
    res.passed = ok;
    res.detail = detail.str();
    res.seconds = seconds_since(start);
    return res;
}

CriterionResult criterion_outer_bounds() {
    const auto start = Clock::now();
    CriterionResult res{5, "Both outer bounds hold with sum equal to the piecewise formula for M,N in 1..8", false, "", 0.0};
    std::ostringstream detail;
    bool ok = true;
    for (int m = 1; m <= 8 && ok; ++m) {
        for (int n = 1; n <= 8 && ok; ++n) {
            const auto quad = achieved_quad(m, n);
            const auto ob = outer_bound_ok(quad[0], quad[1], quad[2], quad[3], m, n);
            const Rational sum = quad[0] + quad[1] + quad[2] + quad[3];
            if (!ob.ok) {
                ok = false;
                detail << "(" << m << "," << n << ") violates a bound";
            } else if (sum != x2_sum_dof(m, n)) {
                ok = false;
                detail << "(" << m << "," << n << ") sum " << sum << " != " << x2_sum_dof(m, n);
            } else if (select_regime(m, n).regime == X2Regime::B &&
                       (ob.slack1 != Rational(0) || ob.slack2 != Rational(0))) {
                ok = false;
                detail << "(" << m << "," << n << ") regime B slack nonzero";
            }
        }
    }
    if (ok) detail << "64 configurations, exact arithmetic";
    res.passed = ok;
    res.detail = detail.str();
    res.seconds = seconds_since(start);
    return res;
}

CriterionResult criterion_snr_sweeps(std::uint64_t seed, int jobs, const std::string& out_dir) {
    const auto start = Clock::now();
    CriterionResult res{6, "SNR sweep slopes within 10% of DoF: x2(2,3), partial K=3, IC K=2", false, "", 0.0};
    std::ostringstream detail;
    bool ok = true;
    auto sweep = [&](SchemeKind kind, int m, int n, int k, const std::string& tag) {
        ExperimentConfig cfg;
        cfg.scheme = kind;
        cfg.m = m;
        cfg.n = n;
        cfg.k = k;
        cfg.mode = RunMode::SnrSweep;
        cfg.p_grid_db = {30.0, 40.0, 50.0, 60.0};
        cfg.trials = 50;
        cfg.master_seed = Rng::split(seed, 600 + static_cast<std::uint64_t>(kind));
        cfg.output_prefix = out_dir + "/c6_" + tag;
        const ExperimentResult r = run_experiment(cfg, jobs);
        detail << tag << ": " << r.detail << "; ";
        if (!r.passed) ok = false;
    };
    sweep(SchemeKind::X2Mimo, 2, 3, 0, "x2_2_3");
    sweep(SchemeKind::KxPartial, 0, 0, 3, "kx_partial_3");
    sweep(SchemeKind::KIc, 0, 0, 2, "k_ic_2");
    res.seconds = seconds_since(start);
    if (ok && res.seconds >= 300.0) {
        ok = false;
        detail << "runtime " << res.seconds << "s exceeds 5min budget";
    }
    res.passed = ok;
    res.detail = detail.str();
    return res;
}

CriterionResult criterion_causality(std::uint64_t seed) {
    const auto start = Clock::now();
    CriterionResult res{7, "Causality audit on every scheme; strict partial-feedback audit", false, "", 0.0};
    std::ostringstream detail;
    bool ok = true;
    auto audit = [&](const Transcript& tr, const std::string& tag) {
        const CausalityReport rep = audit_causality(tr);
        if (!rep.ok) {
            ok = false;
            detail << tag << ": " << rep.detail << "; ";
        }
    };
    audit(run_x2(1, 2, 100.0, false, Rng::split(seed, 71)), "x2 regime A");
    audit(run_x2(2, 3, 100.0, false, Rng::split(seed, 72)), "x2 regime B");
    audit(run_x2(2, 1, 100.0, false, Rng::split(seed, 73)), "x2 regime C");
    audit(run_kx(3, KxMode::GlobalFB, 100.0, false, Rng::split(seed, 74)), "kx global");
    audit(run_mat_standalone(3, 1, 100.0, false, Rng::split(seed, 75)), "mat K=3");
    audit(run_ic(3, 100.0, false, Rng::split(seed, 76)), "IC K=3");
    const Transcript partial = run_kx(3, KxMode::PartialFB, 100.0, false, Rng::split(seed, 77));
    audit(partial, "kx partial");
    const CausalityReport strict = audit_partial_feedback_strict(partial);
    if (!strict.ok) {
        ok = false;
        detail << "strict partial audit: " << strict.detail << "; ";
    }
    if (ok) detail << "all transmissions within causal spans; partial scheme strictly own-feedback";
    res.passed = ok;
    res.detail = detail.str();
    res.seconds = seconds_since(start);
    return res;
}

CriterionResult criterion_determinism(std::uint64_t seed, const std::string& out_dir) {
    const auto start = Clock::now();
    CriterionResult res{8, "Determinism: jobs=1 and jobs=8 produce byte-identical result files", false, "", 0.0};
    std::ostringstream detail;

    auto suite = [&](const std::string& sub, int jobs) {
        std::vector<std::string> files;
        ExperimentConfig decode;
        decode.scheme = SchemeKind::X2Mimo;
        decode.m = 2;
        decode.n = 3;
        decode.mode = RunMode::NoiselessDecode;
        decode.trials = 30;
        decode.master_seed = seed;
        decode.output_prefix = out_dir + "/" + sub + "/x2_2_3";
        auto r1 = run_experiment(decode, jobs);
        files.insert(files.end(), r1.files_written.begin(), r1.files_written.end());

        ExperimentConfig sweep;
        sweep.scheme = SchemeKind::KxPartial;
        sweep.k = 3;
        sweep.mode = RunMode::SnrSweep;
        sweep.p_grid_db = {30.0, 40.0, 50.0, 60.0};
        sweep.trials = 10;
        sweep.master_seed = seed;
        sweep.output_prefix = out_dir + "/" + sub + "/kx_partial_3";
        auto r2 = run_experiment(sweep, jobs);
        files.insert(files.end(), r2.files_written.begin(), r2.files_written.end());
        return files;
    };

    const auto files1 = suite("jobs1", 1);
    const auto files8 = suite("jobs8", 8);
    bool ok = files1.size() == files8.size();
    for (std::size_t i = 0; ok && i < files1.size(); ++i) {
        std::ifstream a(files1[i], std::ios::binary);
        std::ifstream b(files8[i], std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        if (sa.str() != sb.str()) {
            ok = false;
            detail << files1[i] << " differs from " << files8[i];
        }
    }
    if (ok) detail << files1.size() << " result files byte-identical across worker counts";
    res.passed = ok;
    res.detail = detail.str();
    res.seconds = seconds_since(start);
    return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t master_seed, int jobs,
                                            const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<CriterionResult> results;
    results.push_back(criterion_dof_table(master_seed));
    results.push_back(criterion_worked_example(master_seed));
    results.push_back(criterion_rank_matrix(master_seed, jobs, out_dir));
    results.push_back(criterion_counts(master_seed));
    results.push_back(criterion_outer_bounds());
    results.push_back(criterion_snr_sweeps(master_seed, jobs, out_dir));
    results.push_back(criterion_causality(master_seed));
    results.push_back(criterion_determinism(master_seed, out_dir));
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

std::string format_results(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        os << (r.passed ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name;
        if (!r.detail.empty()) os << " -- " << r.detail;
        os << "\n";
    }
    return os.str();
}

}  // namespace xcfb
