#include "xcfb/mat_scheme.hpp"

#include <algorithm>
#include <map>

#include "xcfb/errors.hpp"

namespace xcfb {
namespace {

std::int64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    if (k == 0) return {{}};
    return out;
}

}  // namespace

MatPlan mat_plan(int k) {
    if (k < 1) throw DomainError("mat_plan: K must be >= 1");
    // Rational slot flow per subset: sigma_1 = 1, sigma_{j+1} = j*sigma_j/(K-j).
    std::vector<Rational> sigma(static_cast<std::size_t>(k));
    sigma[0] = Rational(1);
    for (int j = 1; j < k; ++j) sigma[static_cast<std::size_t>(j)] = sigma[static_cast<std::size_t>(j - 1)] * Rational(j, k - j);
    std::int64_t rep = 1;
    for (const auto& s : sigma) rep = lcm64(rep, s.den());

    MatPlan plan;
    plan.k = k;
    plan.replication = static_cast<int>(rep);
    plan.total_slots = 0;
    for (int j = 1; j <= k; ++j) {
        const Rational s = sigma[static_cast<std::size_t>(j - 1)] * Rational(rep);
        if (s.den() != 1) throw DomainError("mat_plan: non-integral slot count");
        const int s_j = static_cast<int>(s.num());
        plan.subset_slots.push_back(s_j);
        plan.symbols_per_subset.push_back(s_j * (k - j + 1));
        const int phase_slots = static_cast<int>(binom(k, j)) * s_j;
        plan.slots_per_phase.push_back(phase_slots);
        plan.total_slots += phase_slots;
    }
    plan.total_order1_symbols = k * plan.symbols_per_subset.front();
    plan.dof = Rational(k) / Rational::harmonic(k);
    if (Rational(plan.total_order1_symbols, plan.total_slots) != plan.dof)
        throw DomainError("mat_plan: schedule does not realize K/H_K");
    return plan;
}

std::vector<MatSlotLog> run_mat_delivery(ChannelEnv& env, const MatPlan& plan, int rounds,
                                         const std::vector<std::vector<LinExpr>>& payloads,
                                         const BroadcastFn& transmit, int start_phase,
                                         const std::vector<std::vector<int>>* phase1_slots) {
    const int k = plan.k;
    if (static_cast<int>(payloads.size()) != k)
        throw DimensionError("run_mat_delivery: payload list per receiver required");
    const int n1 = plan.symbols_per_subset.front() * rounds;
    for (const auto& p : payloads)
        if (static_cast<int>(p.size()) != n1)
            throw DomainError("run_mat_delivery: payload count does not match plan demand");
    if (start_phase == 2 && phase1_slots == nullptr)
        throw DomainError("run_mat_delivery: phase-1 slot indices required when starting at phase 2");

    std::vector<MatSlotLog> log;
    // symbols[subset]: order-j expressions awaiting transmission in phase j.
    std::map<std::vector<int>, std::vector<LinExpr>> symbols;
    std::map<std::vector<int>, std::vector<int>> slot_of;  // per-instance env slot

    for (int q = 0; q < k; ++q) {
        symbols[{q}] = payloads[static_cast<std::size_t>(q)];
        if (start_phase == 2) slot_of[{q}] = (*phase1_slots)[static_cast<std::size_t>(q)];
    }

    for (int phase = 1; phase <= k; ++phase) {
        const int batch = k - phase + 1;
        const int instances = plan.subset_slots[static_cast<std::size_t>(phase - 1)] * rounds;
        const auto subsets = subsets_of_size(k, phase);

        if (phase >= start_phase) {
            for (const auto& subset : subsets) {
                const auto& syms = symbols[subset];
                for (int inst = 0; inst < instances; ++inst) {
                    // One slot: `batch` generic combinations of this
                    // instance's batch on the first `batch` antennas. A
                    // random unitary keeps the mixing generic without
                    // degrading conditioning down the recursion.
                    const CMatrix mix = random_unitary(batch, env.rng());
                    std::vector<LinExpr> antennas(static_cast<std::size_t>(k));
                    for (int a = 0; a < batch; ++a) {
                        LinExpr x;
                        for (int s = 0; s < batch; ++s) {
                            LinExpr scaled = syms[static_cast<std::size_t>(inst * batch + s)];
                            scaled *= mix.at(a, s);
                            x += scaled;
                        }
                        antennas[static_cast<std::size_t>(a)] = std::move(x);
                    }
                    const SlotRecord& rec = transmit(std::move(antennas));
                    slot_of[subset].push_back(rec.slot);
                    log.push_back({phase, subset, batch, rec.slot});
                }
            }
        }

        if (phase == k) break;

        // Compression: for each (phase+1)-subset, the phase+1 overheard raws
        // of one instance combine into `phase` fresh higher-order symbols.
        for (const auto& super : subsets_of_size(k, phase + 1)) {
            auto& target = symbols[super];
            for (int inst = 0; inst < instances; ++inst) {
                std::vector<LinExpr> raws;
                for (int drop = static_cast<int>(super.size()) - 1; drop >= 0; --drop) {
                    std::vector<int> sub = super;
                    const int outsider = sub[static_cast<std::size_t>(drop)];
                    sub.erase(sub.begin() + drop);
                    const int slot = slot_of[sub][static_cast<std::size_t>(inst)];
                    raws.push_back(env.received(outsider, slot, 0));
                }
                // j generic combinations of the j+1 raws; rows of a random
                // unitary stay perfectly conditioned.
                const CMatrix mix = random_unitary(static_cast<int>(raws.size()), env.rng());
                for (int c = 0; c < phase; ++c) {
                    std::vector<Complex> coeffs(raws.size());
                    for (std::size_t i = 0; i < raws.size(); ++i) coeffs[i] = mix.at(c, static_cast<int>(i));
                    target.push_back(combine(coeffs, raws));
                }
            }
        }
    }
    return log;
}

NetworkConfig mat_config(int k, double power, bool noiseless) {
    NetworkConfig cfg;
    cfg.num_tx = 1;
    cfg.num_rx = k;
    cfg.tx_antennas = k;
    cfg.rx_antennas = 1;
    cfg.feedback = FeedbackMode::Global;
    cfg.csi_at_tx = CsiMode::Delayed;
    cfg.power = power;
    cfg.noiseless = noiseless;
    return cfg;
}

Transcript run_mat(ChannelEnv& env, int k, int per_receiver_symbols, std::vector<MatSlotLog>* log) {
    const MatPlan plan = mat_plan(k);
    const int n1 = plan.symbols_per_subset.front();
    if (per_receiver_symbols < n1 || per_receiver_symbols % n1 != 0)
        throw DomainError("run_mat: per-receiver symbol count must be a positive multiple of " +
                          std::to_string(n1));
    const int rounds = per_receiver_symbols / n1;

    std::vector<std::vector<AtomId>> desired(static_cast<std::size_t>(k));
    std::vector<std::vector<LinExpr>> payloads(static_cast<std::size_t>(k));
    for (int q = 0; q < k; ++q) {
        for (int s = 0; s < per_receiver_symbols; ++s) {
            const AtomId id = env.new_symbol(0, q, s % k);
            desired[static_cast<std::size_t>(q)].push_back(id);
            payloads[static_cast<std::size_t>(q)].push_back(LinExpr::atom(id));
        }
    }

    BroadcastFn transmit = [&](std::vector<LinExpr> antennas) -> const SlotRecord& {
        return env.advance_slot({env.scale_to_power(std::move(antennas))});
    };
    auto slot_log = run_mat_delivery(env, plan, rounds, payloads, transmit);
    if (log) *log = slot_log;

    std::vector<int> phase_lengths;
    for (int s : plan.slots_per_phase) phase_lengths.push_back(s * rounds);
    return env.finish("mat_bc_k" + std::to_string(k), std::move(phase_lengths), std::move(desired),
                      plan.dof);
}

Transcript run_mat_standalone(int k, int rounds, double power, bool noiseless, std::uint64_t seed,
                              std::vector<MatSlotLog>* log) {
    ChannelEnv env(mat_config(k, power, noiseless), seed);
    const MatPlan plan = mat_plan(k);
    return run_mat(env, k, plan.symbols_per_subset.front() * rounds, log);
}

}  // namespace xcfb
