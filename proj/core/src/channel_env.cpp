#include "xcfb/channel_env.hpp"

#include <cmath>

#include "xcfb/errors.hpp"

namespace xcfb {

void NetworkConfig::validate() const {
    if (num_tx < 1 || num_rx < 1) throw ConfigError("config: need at least one tx and rx");
    if (tx_antennas < 1 || rx_antennas < 1) throw ConfigError("config: antenna counts must be >= 1");
    if (power <= 0.0) throw ConfigError("config: power must be > 0");
    if (feedback == FeedbackMode::Partial && num_tx != num_rx)
        throw ConfigError("config: partial feedback requires num_tx == num_rx");
    for (const auto& [rx, tx] : feedback_edges)
        if (rx < 0 || rx >= num_rx || tx < 0 || tx >= num_tx)
            throw ConfigError("config: feedback edge out of range");
}

std::vector<int> NetworkConfig::feedback_parents(int tx) const {
    std::vector<int> parents;
    switch (feedback) {
        case FeedbackMode::None:
            break;
        case FeedbackMode::Global:
            for (int rx = 0; rx < num_rx; ++rx) parents.push_back(rx);
            break;
        case FeedbackMode::Partial:
            parents.push_back(tx);
            break;
        case FeedbackMode::Custom:
            for (const auto& [rx, t] : feedback_edges)
                if (t == tx) parents.push_back(rx);
            break;
    }
    return parents;
}

ChannelEnv::ChannelEnv(NetworkConfig config, std::uint64_t seed)
    : cfg_(std::move(config)), rng_(seed) {
    cfg_.validate();
    tx_knowledge_.resize(static_cast<std::size_t>(cfg_.num_tx));
    for (int t = 0; t < cfg_.num_tx; ++t) tx_knowledge_[static_cast<std::size_t>(t)].owner = t;
}

const SlotRecord& ChannelEnv::advance_slot(std::vector<std::vector<LinExpr>> transmitted) {
    if (static_cast<int>(transmitted.size()) != cfg_.num_tx)
        throw DimensionError("advance_slot: transmitter count mismatch");
    for (const auto& antennas : transmitted)
        if (static_cast<int>(antennas.size()) != cfg_.tx_antennas)
            throw DimensionError("advance_slot: antenna count mismatch");

    for (int t = 0; t < cfg_.num_tx; ++t) {
        double p = 0.0;
        for (const auto& e : transmitted[static_cast<std::size_t>(t)]) p += e.expr_power(atoms_);
        if (p > cfg_.power * (1.0 + 1e-9))
            throw ConstraintError("advance_slot: transmitter " + std::to_string(t) +
                                  " exceeds power budget");
    }

    SlotRecord rec;
    rec.slot = current_slot();
    rec.draw.slot = rec.slot;
    rec.draw.h.resize(static_cast<std::size_t>(cfg_.num_rx));
    for (int r = 0; r < cfg_.num_rx; ++r) {
        rec.draw.h[static_cast<std::size_t>(r)].reserve(static_cast<std::size_t>(cfg_.num_tx));
        for (int t = 0; t < cfg_.num_tx; ++t)
            rec.draw.h[static_cast<std::size_t>(r)].push_back(
                gaussian_matrix(cfg_.rx_antennas, cfg_.tx_antennas, rng_));
    }

    rec.transmitted = std::move(transmitted);
    rec.received.assign(static_cast<std::size_t>(cfg_.num_rx), {});
    for (int r = 0; r < cfg_.num_rx; ++r) {
        auto& per_antenna = rec.received[static_cast<std::size_t>(r)];
        per_antenna.assign(static_cast<std::size_t>(cfg_.rx_antennas), LinExpr{});
        for (int a = 0; a < cfg_.rx_antennas; ++a) {
            LinExpr y;
            for (int t = 0; t < cfg_.num_tx; ++t) {
                const CMatrix& h = rec.draw.h[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)];
                for (int b = 0; b < cfg_.tx_antennas; ++b) {
                    LinExpr scaled = rec.transmitted[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)];
                    scaled *= h.at(a, b);
                    y += scaled;
                }
            }
            if (!cfg_.noiseless) {
                const AtomId z = atoms_.add_noise(r, rec.slot, a, rng_.cgaussian());
                y += LinExpr::atom(z);
            }
            per_antenna[static_cast<std::size_t>(a)] = std::move(y);
        }
    }

    slots_.push_back(std::move(rec));
    deliver_feedback(slots_.back());
    return slots_.back();
}

void ChannelEnv::deliver_feedback(const SlotRecord& record) {
    for (int t = 0; t < cfg_.num_tx; ++t) {
        for (int rx : cfg_.feedback_parents(t)) {
            for (int a = 0; a < cfg_.rx_antennas; ++a) {
                KnowledgeEntry entry;
                entry.expr = record.received[static_cast<std::size_t>(rx)][static_cast<std::size_t>(a)];
                entry.label = KnowledgeLabel::Feedback;
                entry.available_from_slot = record.slot + 1;
                entry.source_rx = rx;
                entry.source_slot = record.slot;
                tx_knowledge_[static_cast<std::size_t>(t)].entries.push_back(std::move(entry));
            }
        }
    }
}

const ChannelDraw& ChannelEnv::draw(int slot) const {
    if (slot < 1 || slot > static_cast<int>(slots_.size()))
        throw DimensionError("draw: slot not executed");
    return slots_[static_cast<std::size_t>(slot - 1)].draw;
}

const ChannelDraw& ChannelEnv::tx_csi(int slot) const {
    if (cfg_.csi_at_tx != CsiMode::Delayed)
        throw ModeError("tx_csi: no transmitter CSI in this configuration");
    if (slot >= current_slot())
        throw ModeError("tx_csi: CSI of slot " + std::to_string(slot) +
                        " not yet available at slot " + std::to_string(current_slot()));
    return draw(slot);
}

const LinExpr& ChannelEnv::received(int rx, int slot, int antenna) const {
    if (slot < 1 || slot > static_cast<int>(slots_.size()))
        throw DimensionError("received: slot not executed");
    return slots_[static_cast<std::size_t>(slot - 1)]
        .received[static_cast<std::size_t>(rx)][static_cast<std::size_t>(antenna)];
}

AtomId ChannelEnv::new_symbol(int tx, int intended_rx, int antenna) {
    return atoms_.add_info_symbol(tx, current_slot(), antenna, intended_rx, rng_.cgaussian());
}

std::vector<LinExpr> ChannelEnv::scale_to_power(std::vector<LinExpr> antennas) {
    int active = 0;
    for (const auto& e : antennas)
        if (!e.empty()) ++active;
    if (active == 0) return antennas;
    const double per_antenna = cfg_.power / active;
    for (auto& e : antennas) {
        if (e.empty()) continue;
        const double p = e.expr_power(atoms_);
        e *= Complex{std::sqrt(per_antenna / p), 0.0};
    }
    return antennas;
}

Transcript ChannelEnv::finish(std::string scheme, std::vector<int> phase_lengths,
                              std::vector<std::vector<AtomId>> desired, Rational predicted_dof) {
    Transcript tr;
    tr.scheme = std::move(scheme);
    tr.config = cfg_;
    tr.phase_lengths = std::move(phase_lengths);
    tr.atoms = std::move(atoms_);
    tr.slots = std::move(slots_);
    tr.desired = std::move(desired);
    tr.predicted_dof = predicted_dof;
    atoms_ = AtomTable{};
    slots_.clear();
    return tr;
}

}  // namespace xcfb
