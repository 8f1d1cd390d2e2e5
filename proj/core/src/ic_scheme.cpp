#include "xcfb/ic_scheme.hpp"

#include "xcfb/errors.hpp"
#include "xcfb/mat_scheme.hpp"

namespace xcfb {

IcPlan ic_plan(int k) {
    if (k < 2) throw DomainError("ic_plan: K must be >= 2");
    const MatPlan mat = mat_plan(k);
    IcPlan plan;
    plan.k = k;
    plan.phase1_slots = mat.symbols_per_subset.front();  // one I_j per receiver per slot
    plan.phase_lengths.push_back(plan.phase1_slots);
    for (int s : mat.slots_per_phase) plan.phase_lengths.push_back(s);
    plan.total_symbols = k * plan.phase1_slots;
    plan.predicted_dof = Rational(k) / (Rational(1) + Rational::harmonic(k));
    // total slots = phase1 + mat.total_slots; the ratio must hit the formula.
    if (Rational(plan.total_symbols, plan.phase1_slots + mat.total_slots) != plan.predicted_dof)
        throw DomainError("ic_plan: accounting identity failed");
    return plan;
}

NetworkConfig ic_config(int k, double power, bool noiseless) {
    NetworkConfig cfg;
    cfg.num_tx = k;
    cfg.num_rx = k;
    cfg.tx_antennas = 1;
    cfg.rx_antennas = 1;
    cfg.feedback = FeedbackMode::Global;
    cfg.csi_at_tx = CsiMode::Delayed;
    cfg.power = power;
    cfg.noiseless = noiseless;
    return cfg;
}

Transcript run_ic_global(ChannelEnv& env, int k, IcInternals* internals) {
    if (k < 2) throw DomainError("run_ic_global: K must be >= 2");
    const IcPlan plan = ic_plan(k);
    const MatPlan mat = mat_plan(k);
    std::vector<std::vector<AtomId>> desired(static_cast<std::size_t>(k));

    // Phase 1: every transmitter sends one fresh symbol for its own receiver.
    for (int slot = 0; slot < plan.phase1_slots; ++slot) {
        std::vector<std::vector<LinExpr>> tx(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t) {
            const AtomId id = env.new_symbol(t, t, 0);
            desired[static_cast<std::size_t>(t)].push_back(id);
            tx[static_cast<std::size_t>(t)] = env.scale_to_power({LinExpr::atom(id)});
        }
        env.advance_slot(std::move(tx));
    }

    // Interference recovery. Transmitters jointly solve each slot's K x K
    // feedback system for the transmitted expressions, then resynthesize
    // I_j = sum_{m != j} h_jm x_m with delayed CSI.
    IcInternals side;
    side.interference_true.assign(static_cast<std::size_t>(k), {});
    side.interference_recovered.assign(static_cast<std::size_t>(k), {});
    std::vector<std::vector<LinExpr>> payloads(static_cast<std::size_t>(k));
    for (int slot = 1; slot <= plan.phase1_slots; ++slot) {
        const auto& rec = env.history()[static_cast<std::size_t>(slot - 1)];
        const ChannelDraw& csi = env.tx_csi(slot);
        CMatrix mix(k, k);
        std::vector<LinExpr> obs(static_cast<std::size_t>(k));
        for (int rx = 0; rx < k; ++rx) {
            for (int t = 0; t < k; ++t)
                mix.at(rx, t) = csi.h[static_cast<std::size_t>(rx)][static_cast<std::size_t>(t)].at(0, 0);
            obs[static_cast<std::size_t>(rx)] = rec.received[static_cast<std::size_t>(rx)][0];
        }
        if (!full_column_rank(mix))
            throw SingularSystemError("run_ic_global: degenerate slot draw");
        std::vector<std::vector<Complex>> inv_col(static_cast<std::size_t>(k));
        for (int rx = 0; rx < k; ++rx) {
            std::vector<Complex> unit(static_cast<std::size_t>(k), Complex{0.0, 0.0});
            unit[static_cast<std::size_t>(rx)] = Complex{1.0, 0.0};
            inv_col[static_cast<std::size_t>(rx)] = solve_least_squares(mix, unit);
        }
        std::vector<LinExpr> decoded_tx(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t) {
            LinExpr estimate;
            for (int rx = 0; rx < k; ++rx) {
                LinExpr scaled = obs[static_cast<std::size_t>(rx)];
                scaled *= inv_col[static_cast<std::size_t>(rx)][static_cast<std::size_t>(t)];
                estimate += scaled;
            }
            decoded_tx[static_cast<std::size_t>(t)] = std::move(estimate);
        }
        for (int j = 0; j < k; ++j) {
            LinExpr recovered;
            LinExpr truth;
            for (int t = 0; t < k; ++t) {
                if (t == j) continue;
                LinExpr est = decoded_tx[static_cast<std::size_t>(t)];
                est *= mix.at(j, t);
                recovered += est;
                LinExpr actual = rec.transmitted[static_cast<std::size_t>(t)][0];
                actual *= mix.at(j, t);
                truth += actual;
            }
            side.interference_true[static_cast<std::size_t>(j)].push_back(truth);
            side.interference_recovered[static_cast<std::size_t>(j)].push_back(recovered);
            payloads[static_cast<std::size_t>(j)].push_back(
                side.interference_recovered[static_cast<std::size_t>(j)].back());
        }
    }
    if (internals) *internals = side;

    // Phase 2: the broadcast block ships I_j to receiver j, the K
    // transmitters acting as the K virtual antennas.
    BroadcastFn transmit = [&](std::vector<LinExpr> antennas) -> const SlotRecord& {
        std::vector<std::vector<LinExpr>> tx(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t)
            tx[static_cast<std::size_t>(t)] =
                env.scale_to_power({std::move(antennas[static_cast<std::size_t>(t)])});
        return env.advance_slot(std::move(tx));
    };
    run_mat_delivery(env, mat, 1, payloads, transmit);

    return env.finish("k_ic_k" + std::to_string(k), plan.phase_lengths, std::move(desired),
                      plan.predicted_dof);
}

Transcript run_ic(int k, double power, bool noiseless, std::uint64_t seed, IcInternals* internals) {
    ChannelEnv env(ic_config(k, power, noiseless), seed);
    return run_ic_global(env, k, internals);
}

}  // namespace xcfb
