#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xcfb/ledger.hpp"
#include "xcfb/transcript.hpp"

namespace xcfb {

// Time-slotted physical layer. Samples fading, applies the channel equation
// with fresh noise atoms, enforces the per-transmitter power constraint and
// delivers feedback / delayed CSI with a one-slot delay.
class ChannelEnv {
  public:
    ChannelEnv(NetworkConfig config, std::uint64_t seed);

    const NetworkConfig& config() const { return cfg_; }
    Rng& rng() { return rng_; }
    AtomTable& atoms() { return atoms_; }
    const AtomTable& atoms() const { return atoms_; }

    // Slot about to be executed (1-based).
    int current_slot() const { return static_cast<int>(slots_.size()) + 1; }

    // Executes one slot: checks the power constraint, draws H, forms
    // received = H * transmitted + noise, then delivers feedback and CSI
    // for use from the next slot on.
    const SlotRecord& advance_slot(std::vector<std::vector<LinExpr>> transmitted);

    // Channel draw of an executed slot; receiver-side/analysis access.
    const ChannelDraw& draw(int slot) const;

    // Transmitter-side CSI access: only draws of slots strictly before the
    // current slot, and only when delayed CSI is configured.
    const ChannelDraw& tx_csi(int slot) const;

    // Feedback knowledge of a transmitter (entries carry availability slots).
    const KnowledgeSet& feedback_of(int tx) const { return tx_knowledge_[static_cast<std::size_t>(tx)]; }

    // Received expr of antenna `antenna` at receiver `rx` in executed `slot`.
    const LinExpr& received(int rx, int slot, int antenna) const;

    const std::vector<SlotRecord>& history() const { return slots_; }

    // Fresh information symbol owned by `tx`, intended for `rx`; the sampled
    // ground-truth value comes from this environment's generator.
    AtomId new_symbol(int tx, int intended_rx, int antenna);

    // Scales each non-empty antenna expr of one transmitter so the slot
    // power splits equally across active antennas and sums to the budget.
    std::vector<LinExpr> scale_to_power(std::vector<LinExpr> antennas);

    // Moves the accumulated state into a Transcript.
    Transcript finish(std::string scheme, std::vector<int> phase_lengths,
                      std::vector<std::vector<AtomId>> desired, Rational predicted_dof);

  private:
    void deliver_feedback(const SlotRecord& record);

    NetworkConfig cfg_;
    Rng rng_;
    AtomTable atoms_;
    std::vector<SlotRecord> slots_;
    std::vector<KnowledgeSet> tx_knowledge_;
};

}  // namespace xcfb
