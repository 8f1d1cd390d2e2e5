#include "xcfb/x2_scheme.hpp"

#include <cmath>

#include "xcfb/errors.hpp"

namespace xcfb {
namespace {

// Least-squares decode at the ledger level: returns estimates of the unknown
// expressions behind `obs` given the mixing matrix A (obs = A * unknowns + w).
std::vector<LinExpr> ls_decode(const CMatrix& a, const std::vector<LinExpr>& obs) {
    if (static_cast<int>(obs.size()) != a.rows)
        throw DimensionError("ls_decode: observation count mismatch");
    std::vector<LinExpr> out(static_cast<std::size_t>(a.cols));
    // Columns of the pseudo-inverse, one least-squares solve per observation.
    for (int i = 0; i < a.rows; ++i) {
        std::vector<Complex> unit(static_cast<std::size_t>(a.rows), Complex{0.0, 0.0});
        unit[static_cast<std::size_t>(i)] = Complex{1.0, 0.0};
        const auto col = solve_least_squares(a, unit);
        for (int b = 0; b < a.cols; ++b) {
            LinExpr scaled = obs[static_cast<std::size_t>(i)];
            scaled *= col[static_cast<std::size_t>(b)];
            out[static_cast<std::size_t>(b)] += scaled;
        }
    }
    return out;
}

// H * x for a per-antenna expression vector.
std::vector<LinExpr> apply_matrix(const CMatrix& h, const std::vector<LinExpr>& x) {
    std::vector<LinExpr> out(static_cast<std::size_t>(h.rows));
    for (int r = 0; r < h.rows; ++r) {
        LinExpr y;
        for (int c = 0; c < h.cols; ++c) {
            LinExpr scaled = x[static_cast<std::size_t>(c)];
            scaled *= h.at(r, c);
            y += scaled;
        }
        out[static_cast<std::size_t>(r)] = std::move(y);
    }
    return out;
}

}  // namespace

X2Plan select_regime(int m, int n) {
    if (m < 1 || n < 1) throw DomainError("select_regime: M, N must be >= 1");
    X2Plan plan;
    plan.m = m;
    plan.n = n;
    if (2 * m <= n) {
        plan.regime = X2Regime::A;
        plan.phase_lengths = {1};
        plan.symbols_per_message = m;
        plan.predicted_dof = Rational(2 * m);
    } else if (m <= n) {
        plan.regime = X2Regime::B;
        plan.phase_lengths = {n, n, 2 * m - n};
        plan.symbols_per_message = m * n;
        plan.predicted_dof = Rational(4LL * m * n, 2LL * m + n);
    } else {
        plan.regime = X2Regime::C;
        plan.phase_lengths = {1, 1, 1};
        plan.symbols_per_message = n;
        plan.predicted_dof = Rational(4LL * n, 3);
    }
    return plan;
}

NetworkConfig x2_config(const X2Plan& plan, double power, bool noiseless) {
    NetworkConfig cfg;
    cfg.num_tx = 2;
    cfg.num_rx = 2;
    cfg.tx_antennas = plan.m;
    cfg.rx_antennas = plan.n;
    cfg.power = power;
    cfg.noiseless = noiseless;
    if (plan.regime == X2Regime::C) {
        // Slot 3 retransmissions only need output feedback, but each
        // transmitter forwards under the global feedback graph.
        cfg.feedback = FeedbackMode::Global;
        cfg.csi_at_tx = CsiMode::None;
    } else {
        cfg.feedback = FeedbackMode::Partial;
        cfg.csi_at_tx = CsiMode::Delayed;
    }
    return cfg;
}

Transcript run_regime_a(ChannelEnv& env, int m, int n) {
    if (2 * m > n) throw DomainError("run_regime_a: requires 2M <= N");
    const X2Plan plan = select_regime(m, n);

    // One MAC-style slot: both transmitters send M fresh symbols for rx 0.
    std::vector<std::vector<LinExpr>> tx(2);
    std::vector<std::vector<AtomId>> desired(2);
    for (int t = 0; t < 2; ++t) {
        for (int a = 0; a < m; ++a) {
            const AtomId id = env.new_symbol(t, 0, a);
            desired[0].push_back(id);
            tx[static_cast<std::size_t>(t)].push_back(LinExpr::atom(id));
        }
        tx[static_cast<std::size_t>(t)] = env.scale_to_power(std::move(tx[static_cast<std::size_t>(t)]));
    }
    env.advance_slot(std::move(tx));
    return env.finish("x2_regime_a", plan.phase_lengths, std::move(desired), plan.predicted_dof);
}

Transcript run_regime_b(ChannelEnv& env, int m, int n, X2Internals* internals) {
    if (!(n <= 2 * m && m <= n)) throw DomainError("run_regime_b: requires N <= 2M <= 2N");
    const X2Plan plan = select_regime(m, n);
    const int q = 2 * m * n - n * n;  // side-information symbols per receiver
    const double per_symbol_scale = std::sqrt(env.config().power / m);

    std::vector<std::vector<AtomId>> desired(2);

    // Phases 1 and 2: M fresh symbols per transmitter per slot, symbol k of a
    // message stream on antenna k mod M at slot k / M.
    for (int phase = 0; phase < 2; ++phase) {
        const int rx = phase;  // phase 1 serves rx 0, phase 2 serves rx 1
        for (int slot = 0; slot < n; ++slot) {
            std::vector<std::vector<LinExpr>> tx(2);
            for (int t = 0; t < 2; ++t) {
                for (int a = 0; a < m; ++a) {
                    const AtomId id = env.new_symbol(t, rx, a);
                    desired[static_cast<std::size_t>(rx)].push_back(id);
                    tx[static_cast<std::size_t>(t)].push_back(LinExpr::atom(id));
                }
                tx[static_cast<std::size_t>(t)] = env.scale_to_power(std::move(tx[static_cast<std::size_t>(t)]));
            }
            env.advance_slot(std::move(tx));
        }
    }

    // Side information, native copies: the overhearing receiver's outputs,
    // 2M-N antennas per slot so every slot's 2M-symbol block ends up with
    // N + (2M-N) independent equations. Slot-major, antenna-major; each list
    // is the feedback its like-indexed transmitter holds.
    const int per_slot = 2 * m - n;
    auto selected_outputs = [&](int rx, int first_slot) {
        std::vector<LinExpr> out;
        for (int s = 0; s < n; ++s)
            for (int a = 0; a < per_slot; ++a) out.push_back(env.received(rx, first_slot + s, a));
        return out;
    };
    const std::vector<LinExpr> u_tilde_native = selected_outputs(1, 1);
    const std::vector<LinExpr> v_tilde_native = selected_outputs(0, n + 1);

    // Cross reconstruction: the transmitter that fed a phase subtracts its own
    // contribution from its feedback, least-squares-decodes the peer's symbols
    // and resynthesizes the other receiver's outputs with delayed CSI.
    auto reconstruct = [&](int self, int peer, int first_slot) {
        std::vector<LinExpr> synth;
        for (int s = 0; s < n; ++s) {
            const int slot = first_slot + s;
            const auto& rec = env.history()[static_cast<std::size_t>(slot - 1)];
            const auto& own_tx = rec.transmitted[static_cast<std::size_t>(self)];
            const ChannelDraw& csi = env.tx_csi(slot);
            const CMatrix& h_self = csi.h[static_cast<std::size_t>(self)][static_cast<std::size_t>(self)];
            std::vector<LinExpr> residual(static_cast<std::size_t>(n));
            for (int a = 0; a < n; ++a) {
                LinExpr e = env.received(self, slot, a);
                for (int b = 0; b < m; ++b) {
                    LinExpr scaled = own_tx[static_cast<std::size_t>(b)];
                    scaled *= -h_self.at(a, b);
                    e += scaled;
                }
                residual[static_cast<std::size_t>(a)] = std::move(e);
            }
            // residual = H(self,peer) * x_peer + noise; M <= N makes the
            // decode solvable for generic draws.
            const CMatrix& h_cross = csi.h[static_cast<std::size_t>(self)][static_cast<std::size_t>(peer)];
            CMatrix mix(n, m);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < m; ++b) mix.at(a, b) = h_cross.at(a, b) * per_symbol_scale;
            const std::vector<LinExpr> decoded = ls_decode(mix, residual);
            std::vector<LinExpr> peer_tx(static_cast<std::size_t>(m));
            for (int b = 0; b < m; ++b) {
                peer_tx[static_cast<std::size_t>(b)] = decoded[static_cast<std::size_t>(b)];
                peer_tx[static_cast<std::size_t>(b)] *= per_symbol_scale;
            }
            // Other receiver's outputs, resynthesized noiselessly.
            const int other = 1 - self;
            const CMatrix& g_self = csi.h[static_cast<std::size_t>(other)][static_cast<std::size_t>(self)];
            const CMatrix& g_peer = csi.h[static_cast<std::size_t>(other)][static_cast<std::size_t>(peer)];
            auto from_self = apply_matrix(g_self, own_tx);
            auto from_peer = apply_matrix(g_peer, peer_tx);
            for (int a = 0; a < 2 * m - n; ++a) {
                LinExpr y = from_self[static_cast<std::size_t>(a)];
                y += from_peer[static_cast<std::size_t>(a)];
                synth.push_back(std::move(y));
            }
        }
        return synth;
    };
    const std::vector<LinExpr> u_tilde_rebuilt = reconstruct(0, 1, 1);
    const std::vector<LinExpr> v_tilde_rebuilt = reconstruct(1, 0, n + 1);

    // Phase 3: element-wise sums u~_k + v~_k, N per slot, each exactly once
    // on one antenna, tx 0's antennas before tx 1's. Each transmitter uses
    // its own copy of the side information for the elements it sends.
    X2Internals side;
    side.u_tilde_native = u_tilde_native;
    side.u_tilde_reconstructed = u_tilde_rebuilt;
    side.v_tilde_native = v_tilde_native;
    side.v_tilde_reconstructed = v_tilde_rebuilt;
    for (int slot = 0; slot < 2 * m - n; ++slot) {
        std::vector<std::vector<LinExpr>> tx(2);
        tx[0].assign(static_cast<std::size_t>(m), LinExpr{});
        tx[1].assign(static_cast<std::size_t>(m), LinExpr{});
        for (int pos = 0; pos < n; ++pos) {
            const int element = slot * n + pos;
            const int owner = pos < m ? 0 : 1;
            const int antenna = pos < m ? pos : pos - m;
            LinExpr sum = owner == 0 ? u_tilde_rebuilt[static_cast<std::size_t>(element)]
                                     : u_tilde_native[static_cast<std::size_t>(element)];
            sum += owner == 0 ? v_tilde_native[static_cast<std::size_t>(element)]
                              : v_tilde_rebuilt[static_cast<std::size_t>(element)];
            tx[static_cast<std::size_t>(owner)][static_cast<std::size_t>(antenna)] = std::move(sum);
            side.placement.emplace_back(owner, antenna, slot);
        }
        tx[0] = env.scale_to_power(std::move(tx[0]));
        tx[1] = env.scale_to_power(std::move(tx[1]));
        env.advance_slot(std::move(tx));
    }
    if (internals) *internals = std::move(side);

    return env.finish("x2_regime_b", plan.phase_lengths, std::move(desired), plan.predicted_dof);
}

Transcript run_regime_c(ChannelEnv& env, int m, int n) {
    if (n > m) throw DomainError("run_regime_c: requires N <= M");
    const X2Plan plan = select_regime(m, n);
    std::vector<std::vector<AtomId>> desired(2);

    // Slots 1 and 2: both transmitters send N fresh symbols for rx 0, then
    // for rx 1, on their first N antennas.
    for (int rx = 0; rx < 2; ++rx) {
        std::vector<std::vector<LinExpr>> tx(2);
        for (int t = 0; t < 2; ++t) {
            tx[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(m), LinExpr{});
            for (int a = 0; a < n; ++a) {
                const AtomId id = env.new_symbol(t, rx, a);
                desired[static_cast<std::size_t>(rx)].push_back(id);
                tx[static_cast<std::size_t>(t)][static_cast<std::size_t>(a)] = LinExpr::atom(id);
            }
            tx[static_cast<std::size_t>(t)] = env.scale_to_power(std::move(tx[static_cast<std::size_t>(t)]));
        }
        env.advance_slot(std::move(tx));
    }

    // Slot 3: tx 0 forwards rx 0's slot-2 output (side information rx 0
    // already has, fresh equations for rx 1); tx 1 forwards rx 1's slot-1
    // output. Only output feedback is used.
    std::vector<std::vector<LinExpr>> tx(2);
    tx[0].assign(static_cast<std::size_t>(m), LinExpr{});
    tx[1].assign(static_cast<std::size_t>(m), LinExpr{});
    for (int a = 0; a < n; ++a) {
        tx[0][static_cast<std::size_t>(a)] = env.received(0, 2, a);
        tx[1][static_cast<std::size_t>(a)] = env.received(1, 1, a);
    }
    tx[0] = env.scale_to_power(std::move(tx[0]));
    tx[1] = env.scale_to_power(std::move(tx[1]));
    env.advance_slot(std::move(tx));

    return env.finish("x2_regime_c", plan.phase_lengths, std::move(desired), plan.predicted_dof);
}

Transcript run_x2(int m, int n, double power, bool noiseless, std::uint64_t seed,
                  X2Internals* internals) {
    const X2Plan plan = select_regime(m, n);
    ChannelEnv env(x2_config(plan, power, noiseless), seed);
    switch (plan.regime) {
        case X2Regime::A:
            return run_regime_a(env, m, n);
        case X2Regime::B:
            return run_regime_b(env, m, n, internals);
        case X2Regime::C:
            return run_regime_c(env, m, n);
    }
    throw DomainError("run_x2: unreachable");
}

}  // namespace xcfb
