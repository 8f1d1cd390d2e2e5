#pragma once

#include <tuple>
#include <vector>

#include "xcfb/channel_env.hpp"
#include "xcfb/rational.hpp"

namespace xcfb {

enum class X2Regime : std::uint8_t { A, B, C };

// Plan for the two-user (M,M,N,N) MIMO X-channel run.
struct X2Plan {
    X2Regime regime = X2Regime::A;
    int m = 0;
    int n = 0;
    std::vector<int> phase_lengths;
    int symbols_per_message = 0;
    Rational predicted_dof{0};
};

// Regime selection: A when 2M <= N, B when N <= 2M <= 2N, C when N <= M.
// Boundary ties resolve to the lower-indexed regime (A over B over C).
X2Plan select_regime(int m, int n);

// Environment the plan runs in: partial feedback + delayed CSI for regimes
// A and B, global feedback and no transmitter CSI for regime C.
NetworkConfig x2_config(const X2Plan& plan, double power, bool noiseless);

// Side-information bookkeeping of a regime-B run, exposed for the
// omniscience and placement checks.
struct X2Internals {
    std::vector<LinExpr> u_tilde_native;         // held by tx 1 via feedback
    std::vector<LinExpr> u_tilde_reconstructed;  // rebuilt by tx 0
    std::vector<LinExpr> v_tilde_native;         // held by tx 0 via feedback
    std::vector<LinExpr> v_tilde_reconstructed;  // rebuilt by tx 1
    std::vector<std::tuple<int, int, int>> placement;  // element -> (tx, antenna, slot)
};

Transcript run_regime_a(ChannelEnv& env, int m, int n);
Transcript run_regime_b(ChannelEnv& env, int m, int n, X2Internals* internals = nullptr);
Transcript run_regime_c(ChannelEnv& env, int m, int n);

// Builds the environment for (M, N), dispatches on the selected regime.
Transcript run_x2(int m, int n, double power, bool noiseless, std::uint64_t seed,
                  X2Internals* internals = nullptr);

}  // namespace xcfb
