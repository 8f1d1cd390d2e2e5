#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "xcfb/cmatrix.hpp"
#include "xcfb/ledger.hpp"
#include "xcfb/rational.hpp"

namespace xcfb {

enum class FeedbackMode : std::uint8_t { None, Global, Partial, Custom };
enum class CsiMode : std::uint8_t { None, Delayed };

struct NetworkConfig {
    int num_tx = 1;
    int num_rx = 1;
    int tx_antennas = 1;  // M, per transmitter
    int rx_antennas = 1;  // N, per receiver
    FeedbackMode feedback = FeedbackMode::None;
    std::vector<std::pair<int, int>> feedback_edges;  // (rx, tx), Custom mode only
    CsiMode csi_at_tx = CsiMode::None;
    double power = 1.0;  // linear scale
    bool noiseless = false;

    void validate() const;
    // Receivers whose outputs feed back to transmitter `tx`.
    std::vector<int> feedback_parents(int tx) const;
};

// Fading matrices of one slot: h[rx][tx] is rx_antennas x tx_antennas.
struct ChannelDraw {
    int slot = 0;
    std::vector<std::vector<CMatrix>> h;
};

// Everything that happened in one slot.
struct SlotRecord {
    int slot = 0;                                   // 1-based
    ChannelDraw draw;
    std::vector<std::vector<LinExpr>> transmitted;  // [tx][antenna]
    std::vector<std::vector<LinExpr>> received;     // [rx][antenna]
};

// Full record of a scheme run; the input to all analysis.
struct Transcript {
    std::string scheme;
    NetworkConfig config;
    std::vector<int> phase_lengths;
    AtomTable atoms;
    std::vector<SlotRecord> slots;
    std::vector<std::vector<AtomId>> desired;  // per receiver
    Rational predicted_dof{0};

    int total_slots() const { return static_cast<int>(slots.size()); }
    long long total_symbols() const;
    Rational ratio() const;  // symbols / slots, exact

    // One record per slot: transmitted exprs, channel draw, received exprs.
    // Debug format, documented in the README; not bit-standardized.
    void write_text(std::ostream& os) const;
};

}  // namespace xcfb
