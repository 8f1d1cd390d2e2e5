#pragma once

#include <vector>

#include "xcfb/channel_env.hpp"
#include "xcfb/rational.hpp"

namespace xcfb {

struct IcPlan {
    int k = 0;
    int phase1_slots = 0;  // fresh-symbol slots per round, sized to the broadcast demand
    std::vector<int> phase_lengths;
    int total_symbols = 0;
    Rational predicted_dof{0};  // K / (1 + H_K)
};

IcPlan ic_plan(int k);

NetworkConfig ic_config(int k, double power, bool noiseless);

// Interference bookkeeping of a run, for the recovery checks: per receiver j
// and fresh-symbol slot, the true interference component (the slot output
// minus the direct term and noise) and the transmitters' recovered copy.
struct IcInternals {
    std::vector<std::vector<LinExpr>> interference_true;       // [rx][slot index]
    std::vector<std::vector<LinExpr>> interference_recovered;  // [rx][slot index]
};

// Global feedback + delayed CSI: every transmitter sends one fresh symbol
// per phase-1 slot; feedback makes all transmitters omniscient, they recover
// every interference component I_j, and the broadcast block ships I_j to
// receiver j. Sum DoF K / (2 + 1/2 + ... + 1/K).
Transcript run_ic_global(ChannelEnv& env, int k, IcInternals* internals = nullptr);

Transcript run_ic(int k, double power, bool noiseless, std::uint64_t seed,
                  IcInternals* internals = nullptr);

}  // namespace xcfb
