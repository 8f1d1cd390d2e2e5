#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xcfb/cmatrix.hpp"
#include "xcfb/rng.hpp"

namespace xcfb {

using AtomId = std::int32_t;

enum class AtomKind : std::uint8_t { InfoSymbol, Noise };

// An atomic signal source: one information symbol or one per-slot,
// per-antenna noise sample. Every signal in a run is an exact linear
// combination of these.
struct SourceAtom {
    AtomId id = -1;
    AtomKind kind = AtomKind::InfoSymbol;
    int origin_node = -1;        // transmitter id for symbols, receiver id for noise
    int slot = 0;                // slot of first transmission / of the noise sample
    int antenna = 0;
    int intended_receiver = -1;  // InfoSymbol only; -1 for noise
    double power = 1.0;          // unit for noise; nominal symbol power otherwise
    Complex value{0.0, 0.0};     // sampled ground truth, used by decode checks
};

class AtomTable {
  public:
    AtomId add_info_symbol(int tx, int slot, int antenna, int intended_rx, Complex value);
    AtomId add_noise(int rx, int slot, int antenna, Complex value);

    const SourceAtom& operator[](AtomId id) const { return atoms_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return atoms_.size(); }

    std::vector<AtomId> info_symbols_for(int rx) const;

  private:
    std::vector<SourceAtom> atoms_;
};

// Exact linear combination of atoms. Canonical form: terms sorted by atom id,
// no stored zero coefficients.
class LinExpr {
  public:
    using Term = std::pair<AtomId, Complex>;

    LinExpr() = default;
    static LinExpr atom(AtomId id, Complex coeff = Complex{1.0, 0.0});

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Complex coeff(AtomId id) const;
    std::vector<AtomId> support() const;
    bool has_info_atoms(const AtomTable& atoms) const;

    LinExpr& operator+=(const LinExpr& o);
    LinExpr& operator-=(const LinExpr& o);
    LinExpr& operator*=(Complex c);
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(Complex c, LinExpr e) { return e *= c; }

    // Drops coefficients with |c| <= abs_tol or |c| <= rel_tol * max|coeff|.
    void drop_small(double abs_tol = 1e-10, double rel_tol = 1e-10);

    // Ledger power: sum of |coeff|^2 * atom.power.
    double expr_power(const AtomTable& atoms) const;

    // Numeric value under the table's sampled atom values.
    Complex value(const AtomTable& atoms) const;

    bool approx_equal(const LinExpr& o, double tol) const;

  private:
    std::vector<Term> terms_;
};

// Exact linear combination sum_i coeffs[i] * exprs[i].
LinExpr combine(std::span<const Complex> coeffs, std::span<const LinExpr> exprs);

// Subtracts the least-squares-best combination of `known` from `target`,
// removing every atom of `target` that the span of `known` can eliminate.
// Atoms outside that span survive; near-zero residual coefficients are
// dropped. Never introduces atoms absent from target and known.
LinExpr cancel_known(const LinExpr& target, std::span<const LinExpr> known);

struct CoeffSystem {
    CMatrix matrix;                // exprs.size() x unknowns.size()
    std::vector<LinExpr> residual; // per-expr terms outside `unknowns`
};

// Coefficients of `unknowns` in each expr; duplicate unknown ids are an error.
CoeffSystem coefficient_matrix(std::span<const LinExpr> exprs, std::span<const AtomId> unknowns);

enum class KnowledgeLabel : std::uint8_t {
    OwnTransmission,
    Feedback,
    Reconstruction,
    CsiDerived,
};

struct KnowledgeEntry {
    LinExpr expr;
    KnowledgeLabel label = KnowledgeLabel::Feedback;
    int available_from_slot = 0;  // earliest slot whose encoder may use it
    int source_rx = -1;           // for feedback: which receiver's output
    int source_slot = 0;          // slot the underlying output was received in
};

// Per-node archive of expressions available for encoding, with availability
// slots enforcing the one-slot feedback/CSI delay.
struct KnowledgeSet {
    int owner = -1;
    std::vector<KnowledgeEntry> entries;
};

}  // namespace xcfb
