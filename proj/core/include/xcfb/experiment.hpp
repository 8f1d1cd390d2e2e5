#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xcfb/analysis.hpp"
#include "xcfb/config_file.hpp"

namespace xcfb {

enum class SchemeKind : std::uint8_t { X2Mimo, KxPartial, KxGlobal, MatBc, KIc };
enum class RunMode : std::uint8_t { RankVerify, NoiselessDecode, SnrSweep };

std::string scheme_name(SchemeKind s);

struct ExperimentConfig {
    SchemeKind scheme = SchemeKind::X2Mimo;
    int m = 0;  // x2_mimo
    int n = 0;
    int k = 0;  // K-user schemes
    int rounds = 1;  // mat_bc demand multiplier
    RunMode mode = RunMode::RankVerify;
    double power = 100.0;                 // rank/decode modes
    std::vector<double> p_grid_db;        // snr_sweep mode
    int trials = 100;
    std::uint64_t master_seed = 42;
    std::string output_prefix;            // empty: no files written

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_kv(const KeyValueConfig& kv);
    void validate() const;

    // Exact DoF the configured scheme is expected to achieve.
    Rational predicted_dof() const;
    // One seeded run of the configured scheme.
    Transcript run_once(double power, bool noiseless, std::uint64_t seed) const;
};

struct ExperimentResult {
    DofReport report;
    bool passed = false;            // the selected mode's assertions
    std::string detail;
    std::vector<std::string> files_written;
};

// Runs the configured experiment over `jobs` workers. Output files (a
// per-trial CSV, a summary record, sweep plot data) are byte-identical for
// any worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Resolves the output prefix against XCFB_OUTPUT_DIR for relative paths.
std::string resolve_output_prefix(const std::string& prefix);

}  // namespace xcfb
