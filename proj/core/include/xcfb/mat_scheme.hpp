#pragma once

#include <functional>
#include <vector>

#include "xcfb/channel_env.hpp"
#include "xcfb/rational.hpp"

namespace xcfb {

// Schedule of the retrospective-alignment broadcast block for K single-antenna
// receivers: phase j serves every j-subset of receivers with order-j symbols,
// compressing overheard equations upward until phase K broadcasts symbols
// useful to everyone. Sum DoF is K / (1 + 1/2 + ... + 1/K).
struct MatPlan {
    int k = 0;
    int replication = 1;                  // slots per singleton subset (phase 1)
    std::vector<int> subset_slots;        // s_j, per phase j = 1..K
    std::vector<int> symbols_per_subset;  // N_j, per phase
    std::vector<int> slots_per_phase;     // C(K,j) * s_j
    int total_slots = 0;
    int total_order1_symbols = 0;         // K * N_1
    Rational dof{0};                      // K / H_K, exact
};

MatPlan mat_plan(int k);

// Maps per-antenna expressions of the virtual K-antenna broadcaster onto an
// executed slot. Standalone MAT uses a single K-antenna transmitter; the
// K-user schemes spread the antennas across their K transmitters.
using BroadcastFn = std::function<const SlotRecord&(std::vector<LinExpr> per_antenna)>;

// Record of one engine slot, for structural assertions in tests.
struct MatSlotLog {
    int phase = 0;
    std::vector<int> subset;
    int batch_size = 0;
    int env_slot = 0;
};

// Runs phases [start_phase..K] of the delivery recursion. payloads[q] holds
// receiver q's order-1 expressions (plan demand times `rounds`). When
// start_phase == 2 the order-1 transmissions already happened outside the
// engine and `phase1_slots[q]` lists the env slot of each instance serving q.
std::vector<MatSlotLog> run_mat_delivery(ChannelEnv& env, const MatPlan& plan, int rounds,
                                         const std::vector<std::vector<LinExpr>>& payloads,
                                         const BroadcastFn& transmit, int start_phase = 1,
                                         const std::vector<std::vector<int>>* phase1_slots = nullptr);

// Standalone broadcast experiment: one K-antenna transmitter owning
// per_receiver_symbols fresh symbols per receiver (a multiple of the plan's
// per-receiver demand K * replication).
Transcript run_mat(ChannelEnv& env, int k, int per_receiver_symbols,
                   std::vector<MatSlotLog>* log = nullptr);

// Environment for the standalone run: 1 transmitter with K antennas,
// K single-antenna receivers, global feedback, delayed CSI.
NetworkConfig mat_config(int k, double power, bool noiseless);

Transcript run_mat_standalone(int k, int rounds, double power, bool noiseless, std::uint64_t seed,
                              std::vector<MatSlotLog>* log = nullptr);

}  // namespace xcfb
