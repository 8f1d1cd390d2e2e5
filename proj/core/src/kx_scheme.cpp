#include "xcfb/kx_scheme.hpp"

#include "xcfb/errors.hpp"
#include "xcfb/mat_scheme.hpp"

namespace xcfb {

KxPlan kx_plan(int k, KxMode mode) {
    KxPlan plan;
    plan.k = k;
    plan.mode = mode;
    if (mode == KxMode::PartialFB) {
        if (k < 2) throw DomainError("kx_plan: partial feedback requires K >= 2");
        plan.phase_lengths = {k, k * (k - 1) / 2};
        plan.total_symbols = k * k;
        plan.predicted_dof = Rational(2LL * k, k + 1);
    } else {
        if (k < 1) throw DomainError("kx_plan: K must be >= 1");
        const MatPlan mat = mat_plan(k);
        plan.phase_lengths.push_back(mat.slots_per_phase.front());
        for (std::size_t j = 1; j < mat.slots_per_phase.size(); ++j)
            plan.phase_lengths.push_back(mat.slots_per_phase[j]);
        plan.total_symbols = mat.total_order1_symbols;
        plan.predicted_dof = mat.dof;
    }
    return plan;
}

NetworkConfig kx_config(int k, KxMode mode, double power, bool noiseless) {
    NetworkConfig cfg;
    cfg.num_tx = k;
    cfg.num_rx = k;
    cfg.tx_antennas = 1;
    cfg.rx_antennas = 1;
    cfg.power = power;
    cfg.noiseless = noiseless;
    if (mode == KxMode::PartialFB) {
        cfg.feedback = FeedbackMode::Partial;
        cfg.csi_at_tx = CsiMode::None;
    } else {
        cfg.feedback = FeedbackMode::Global;
        cfg.csi_at_tx = CsiMode::Delayed;
    }
    return cfg;
}

namespace {

// Fresh-symbol slot: every transmitter sends one new symbol for receiver rx.
void fresh_symbol_slot(ChannelEnv& env, int k, int rx, std::vector<std::vector<AtomId>>& desired) {
    std::vector<std::vector<LinExpr>> tx(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        const AtomId id = env.new_symbol(t, rx, 0);
        desired[static_cast<std::size_t>(rx)].push_back(id);
        tx[static_cast<std::size_t>(t)] =
            env.scale_to_power({LinExpr::atom(id)});
    }
    env.advance_slot(std::move(tx));
}

}  // namespace

Transcript run_partial_fb(ChannelEnv& env, int k) {
    if (k < 2) throw DomainError("run_partial_fb: K must be >= 2");
    const KxPlan plan = kx_plan(k, KxMode::PartialFB);
    std::vector<std::vector<AtomId>> desired(static_cast<std::size_t>(k));

    // Phase 1: slot t carries the K symbols destined to receiver t.
    for (int rx = 0; rx < k; ++rx) fresh_symbol_slot(env, k, rx, desired);

    // Phase 2: lexicographic pair slots. A_i(j) is receiver i's phase-1
    // output at slot j+1, held by transmitter i through partial feedback.
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            std::vector<std::vector<LinExpr>> tx(static_cast<std::size_t>(k));
            for (int t = 0; t < k; ++t) tx[static_cast<std::size_t>(t)] = {LinExpr{}};
            tx[static_cast<std::size_t>(i)] = env.scale_to_power({env.received(i, j + 1, 0)});
            tx[static_cast<std::size_t>(j)] = env.scale_to_power({env.received(j, i + 1, 0)});
            env.advance_slot(std::move(tx));
        }
    }
    return env.finish("kx_partial_k" + std::to_string(k), plan.phase_lengths, std::move(desired),
                      plan.predicted_dof);
}

Transcript run_global_fb(ChannelEnv& env, int k) {
    if (k < 1) throw DomainError("run_global_fb: K must be >= 1");
    const KxPlan plan = kx_plan(k, KxMode::GlobalFB);
    const MatPlan mat = mat_plan(k);
    std::vector<std::vector<AtomId>> desired(static_cast<std::size_t>(k));

    // Phase 1: `replication` rounds of the K fresh-symbol slots. Slot t of a
    // round doubles as the broadcast block's order-1 slot for receiver t.
    std::vector<std::vector<int>> phase1_slots(static_cast<std::size_t>(k));
    for (int round = 0; round < mat.replication; ++round) {
        for (int rx = 0; rx < k; ++rx) {
            fresh_symbol_slot(env, k, rx, desired);
            phase1_slots[static_cast<std::size_t>(rx)].push_back(
                env.history().back().slot);
        }
    }

    // Order-1 payloads: one singleton expression per transmitted symbol. The
    // engine consumes them batch-by-batch in instance order, matching the
    // slot layout above.
    std::vector<std::vector<LinExpr>> payloads(static_cast<std::size_t>(k));
    for (int q = 0; q < k; ++q)
        for (AtomId id : desired[static_cast<std::size_t>(q)])
            payloads[static_cast<std::size_t>(q)].push_back(LinExpr::atom(id));

    // Higher phases: the K transmitters act as one K-antenna broadcaster.
    // Global feedback plus delayed CSI makes every transmitter omniscient,
    // so each can form any combination of past receiver outputs.
    BroadcastFn transmit = [&](std::vector<LinExpr> antennas) -> const SlotRecord& {
        std::vector<std::vector<LinExpr>> tx(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t)
            tx[static_cast<std::size_t>(t)] =
                env.scale_to_power({std::move(antennas[static_cast<std::size_t>(t)])});
        return env.advance_slot(std::move(tx));
    };
    run_mat_delivery(env, mat, 1, payloads, transmit, 2, &phase1_slots);

    return env.finish("kx_global_k" + std::to_string(k), plan.phase_lengths, std::move(desired),
                      plan.predicted_dof);
}

std::vector<LinExpr> global_fb_decoded_pool(const Transcript& tr) {
    const int k = tr.config.num_tx;
    std::vector<LinExpr> pool;
    // One K x K system per phase-1 slot: every receiver's output over the
    // slot's transmitted expressions.
    const int phase1 = tr.phase_lengths.front();
    for (int slot = 1; slot <= phase1; ++slot) {
        const auto& rec = tr.slots[static_cast<std::size_t>(slot - 1)];
        CMatrix mix(k, k);
        std::vector<LinExpr> obs(static_cast<std::size_t>(k));
        for (int rx = 0; rx < k; ++rx) {
            for (int t = 0; t < k; ++t)
                mix.at(rx, t) = rec.draw.h[static_cast<std::size_t>(rx)][static_cast<std::size_t>(t)].at(0, 0);
            obs[static_cast<std::size_t>(rx)] = rec.received[static_cast<std::size_t>(rx)][0];
        }
        if (!full_column_rank(mix))
            throw SingularSystemError("global_fb_decoded_pool: degenerate slot draw");
        // Columns of mix^{-1}, applied at the ledger level:
        // decoded transmitted expr t = sum_rx inv[t][rx] * obs[rx].
        std::vector<std::vector<Complex>> inv_col(static_cast<std::size_t>(k));
        for (int rx = 0; rx < k; ++rx) {
            std::vector<Complex> unit(static_cast<std::size_t>(k), Complex{0.0, 0.0});
            unit[static_cast<std::size_t>(rx)] = Complex{1.0, 0.0};
            inv_col[static_cast<std::size_t>(rx)] = solve_least_squares(mix, unit);
        }
        for (int t = 0; t < k; ++t) {
            LinExpr estimate;
            for (int rx = 0; rx < k; ++rx) {
                LinExpr scaled = obs[static_cast<std::size_t>(rx)];
                scaled *= inv_col[static_cast<std::size_t>(rx)][static_cast<std::size_t>(t)];
                estimate += scaled;
            }
            // The transmitted expression is scale * atom; unscale so the
            // pool entry estimates the symbol itself.
            const LinExpr& sent = rec.transmitted[static_cast<std::size_t>(t)][0];
            if (sent.size() == 1) estimate *= Complex{1.0, 0.0} / sent.terms().front().second;
            pool.push_back(std::move(estimate));
        }
    }
    return pool;
}

Transcript run_kx(int k, KxMode mode, double power, bool noiseless, std::uint64_t seed) {
    ChannelEnv env(kx_config(k, mode, power, noiseless), seed);
    return mode == KxMode::PartialFB ? run_partial_fb(env, k) : run_global_fb(env, k);
}

}  // namespace xcfb
