#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xcfb/rational.hpp"
#include "xcfb/transcript.hpp"

namespace xcfb {

// Piecewise sum-DoF formula for the (M,M,N,N) MIMO X-channel with feedback
// and delayed CSI: 2M when 2M<=N, 4MN/(2M+N) when N<=2M<=2N, 4N/3 when N<=M.
Rational x2_sum_dof(int m, int n);

struct OuterBoundResult {
    bool ok = false;
    Rational slack1{0};  // 1 - LHS of the first bound
    Rational slack2{0};
};

// Checks the DoF quadruple (d11, d12, d22, d21) against both broadcast-type
// outer bounds, in exact rational arithmetic.
OuterBoundResult outer_bound_ok(const Rational& d11, const Rational& d12, const Rational& d22,
                                const Rational& d21, int m, int n);

// A receiver's linear system after subtracting its own earlier outputs from
// each observation. Desired-symbol decodability is judged on the desired
// block projected orthogonally to the foreign columns, which is invariant
// to how rows happen to be combined. A foreign-free row reduction of the
// same stack backs the rate computation.
struct EffectiveSystem {
    int receiver = -1;
    std::vector<AtomId> desired;
    std::vector<AtomId> foreign;    // info symbols of other receivers still present
    std::vector<LinExpr> rows;      // own-prior-cancelled, info-bearing observations
    CMatrix coeffs;                 // rows x desired
    CMatrix foreign_coeffs;         // rows x foreign
    double min_sv = 0.0;            // of the foreign-projected desired block
    double max_sv = 0.0;

    // Foreign-free reduction (pivot rows spent on foreign elimination).
    std::vector<LinExpr> reduced_rows;
    CMatrix reduced_coeffs;         // reduced rows x desired
    CMatrix reduced_noise;          // reduced rows x noise atoms
    std::vector<AtomId> reduced_noise_ids;

    // Relative rank margin; generic full rank shows up as margin >> 1e-6.
    double rank_margin() const { return max_sv > 0.0 ? min_sv / max_sv : 0.0; }
};

EffectiveSystem build_effective_system(const Transcript& tr, int receiver);

struct ReceiverVerdict {
    int receiver = -1;
    bool rank_ok = false;
    double rank_margin = 0.0;
    bool decode_exact = false;   // noiseless mode only; true vacuously otherwise
    std::string detail;
};

// Per-receiver decodability: square-or-tall effective system, singular-value
// margin above `margin_threshold`, and (noiseless runs) exact ground-truth
// recovery of every desired symbol.
std::vector<ReceiverVerdict> verify_decodability(const Transcript& tr,
                                                 double margin_threshold = 1e-6);

// Gaussian achievable rate in bits per slot for each receiver, from the
// ledger-exact effective system: desired symbols as unit-power inputs whose
// transmit power sits in the coefficients, all noise atoms (fresh and
// forwarded) as unit-power Gaussian interference.
std::vector<double> achievable_rate(const Transcript& tr, double power);

// Sum over receivers of achievable_rate.
double sum_rate(const Transcript& tr);

struct CausalityReport {
    bool ok = false;
    std::string detail;
};

// Replays a transcript and checks that every transmitted signal at slot t
// lies in the span of the transmitter's own information symbols plus the
// outputs of its feedback parents from slots strictly before t.
CausalityReport audit_causality(const Transcript& tr);

// Stricter audit for partial-feedback runs: phase-1 transmissions carry only
// the transmitter's own fresh symbols; later transmissions are scalar copies
// of a single past output of its own receiver (so no CSI enters encoding).
CausalityReport audit_partial_feedback_strict(const Transcript& tr);

struct DofReport {
    std::string scheme;
    long long symbols = 0;
    long long slots = 0;
    Rational ratio{0};
    Rational predicted{0};
    double rank_pass = 0.0;                // fraction of trials passing
    std::optional<double> slope;           // snr_sweep mode only
};

// Least-squares slope of mean rate versus log2(P), fitted over the top half
// of the (ascending) power grid.
double fit_top_half_slope(const std::vector<double>& p_grid, const std::vector<double>& mean_rates);

// Runs a scheme at each power in `p_grid` for `trials` seeded trials and
// fits the least-squares slope of mean sum rate vs log2(P) over the top
// half of the grid.
using SchemeRunner = std::function<Transcript(double power, std::uint64_t seed)>;
double dof_slope(const SchemeRunner& runner, const std::vector<double>& p_grid, int trials,
                 std::uint64_t master_seed, int jobs = 1,
                 std::vector<double>* mean_rates_out = nullptr);

}  // namespace xcfb
