#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xcfb {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the full acceptance matrix: the sum-DoF table, the worked example,
// rank/decode verification across all schemes, the K-user slot counts,
// outer-bound consistency, SNR-sweep slopes, causality audits and the
// jobs-independence check. Result files land under `out_dir`.
std::vector<CriterionResult> run_acceptance(std::uint64_t master_seed, int jobs,
                                            const std::string& out_dir);

bool all_passed(const std::vector<CriterionResult>& results);

// One "[PASS] ..." / "[FAIL] ..." line per criterion.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace xcfb
