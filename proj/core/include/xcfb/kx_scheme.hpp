#pragma once

#include <vector>

#include "xcfb/channel_env.hpp"
#include "xcfb/rational.hpp"

namespace xcfb {

enum class KxMode : std::uint8_t { PartialFB, GlobalFB };

struct KxPlan {
    int k = 0;
    KxMode mode = KxMode::PartialFB;
    std::vector<int> phase_lengths;
    int total_symbols = 0;
    Rational predicted_dof{0};
};

KxPlan kx_plan(int k, KxMode mode);

NetworkConfig kx_config(int k, KxMode mode, double power, bool noiseless);

// Partial feedback, no transmitter CSI: K fresh-symbol slots, then one slot
// per unordered pair {i, j} in which tx i forwards its receiver's output
// from slot j+1 and tx j forwards its receiver's output from slot i+1.
// K^2 symbols in K + K(K-1)/2 slots.
Transcript run_partial_fb(ChannelEnv& env, int k);

// Global feedback + delayed CSI: fresh-symbol slots as above (replicated to
// the broadcast block's demand), transmitter omniscience via the per-slot
// K x K feedback systems, then the retrospective broadcast phases deliver
// the overheard equations. K/H_K sum DoF.
Transcript run_global_fb(ChannelEnv& env, int k);

// Ledger expressions of every phase-1 symbol as decoded by the transmitters
// from global feedback; exact (atom-only) in noiseless runs.
std::vector<LinExpr> global_fb_decoded_pool(const Transcript& tr);

Transcript run_kx(int k, KxMode mode, double power, bool noiseless, std::uint64_t seed);

}  // namespace xcfb
