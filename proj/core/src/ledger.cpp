#include "xcfb/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xcfb/errors.hpp"

namespace xcfb {

AtomId AtomTable::add_info_symbol(int tx, int slot, int antenna, int intended_rx, Complex value) {
    SourceAtom a;
    a.id = static_cast<AtomId>(atoms_.size());
    a.kind = AtomKind::InfoSymbol;
    a.origin_node = tx;
    a.slot = slot;
    a.antenna = antenna;
    a.intended_receiver = intended_rx;
    a.power = 1.0;
    a.value = value;
    atoms_.push_back(a);
    return a.id;
}

AtomId AtomTable::add_noise(int rx, int slot, int antenna, Complex value) {
    SourceAtom a;
    a.id = static_cast<AtomId>(atoms_.size());
    a.kind = AtomKind::Noise;
    a.origin_node = rx;
    a.slot = slot;
    a.antenna = antenna;
    a.intended_receiver = -1;
    a.power = 1.0;
    a.value = value;
    atoms_.push_back(a);
    return a.id;
}

std::vector<AtomId> AtomTable::info_symbols_for(int rx) const {
    std::vector<AtomId> out;
    for (const auto& a : atoms_)
        if (a.kind == AtomKind::InfoSymbol && a.intended_receiver == rx) out.push_back(a.id);
    return out;
}

LinExpr LinExpr::atom(AtomId id, Complex coeff) {
    LinExpr e;
    if (coeff != Complex{0.0, 0.0}) e.terms_.push_back({id, coeff});
    return e;
}

Complex LinExpr::coeff(AtomId id) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                               [](const Term& t, AtomId v) { return t.first < v; });
    if (it != terms_.end() && it->first == id) return it->second;
    return {0.0, 0.0};
}

std::vector<AtomId> LinExpr::support() const {
    std::vector<AtomId> out;
    out.reserve(terms_.size());
    for (const auto& [id, c] : terms_) out.push_back(id);
    return out;
}

bool LinExpr::has_info_atoms(const AtomTable& atoms) const {
    for (const auto& [id, c] : terms_)
        if (atoms[id].kind == AtomKind::InfoSymbol) return true;
    return false;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
        if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == terms_.end() || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            const Complex c = a->second + b->second;
            if (c != Complex{0.0, 0.0}) merged.push_back({a->first, c});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
    LinExpr neg = o;
    neg *= Complex{-1.0, 0.0};
    return *this += neg;
}

LinExpr& LinExpr::operator*=(Complex c) {
    if (c == Complex{0.0, 0.0}) {
        terms_.clear();
        return *this;
    }
    for (auto& [id, v] : terms_) v *= c;
    return *this;
}

void LinExpr::drop_small(double abs_tol, double rel_tol) {
    double max_mag = 0.0;
    for (const auto& [id, c] : terms_) max_mag = std::max(max_mag, std::abs(c));
    const double cut = std::max(abs_tol, rel_tol * max_mag);
    std::erase_if(terms_, [cut](const Term& t) { return std::abs(t.second) <= cut; });
}

double LinExpr::expr_power(const AtomTable& atoms) const {
    double p = 0.0;
    for (const auto& [id, c] : terms_) p += std::norm(c) * atoms[id].power;
    return p;
}

Complex LinExpr::value(const AtomTable& atoms) const {
    Complex v{0.0, 0.0};
    for (const auto& [id, c] : terms_) v += c * atoms[id].value;
    return v;
}

bool LinExpr::approx_equal(const LinExpr& o, double tol) const {
    std::set<AtomId> ids;
    for (const auto& [id, c] : terms_) ids.insert(id);
    for (const auto& [id, c] : o.terms_) ids.insert(id);
    for (AtomId id : ids)
        if (std::abs(coeff(id) - o.coeff(id)) > tol) return false;
    return true;
}

LinExpr combine(std::span<const Complex> coeffs, std::span<const LinExpr> exprs) {
    if (coeffs.size() != exprs.size())
        throw DimensionError("combine: coefficient/expression count mismatch");
    LinExpr out;
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        LinExpr scaled = exprs[i];
        scaled *= coeffs[i];
        out += scaled;
    }
    return out;
}

LinExpr cancel_known(const LinExpr& target, std::span<const LinExpr> known) {
    if (known.empty() || target.empty()) return target;

    // Atom support of the knowns, as elimination columns.
    std::set<AtomId> support_set;
    for (const auto& k : known)
        for (const auto& [id, c] : k.terms()) support_set.insert(id);
    std::vector<AtomId> support(support_set.begin(), support_set.end());
    if (support.empty()) return target;

    // Nothing to do when the target never touches the knowns' atoms.
    bool overlaps = false;
    for (AtomId id : support)
        if (target.coeff(id) != Complex{0.0, 0.0}) {
            overlaps = true;
            break;
        }
    if (!overlaps) return target;

    // Least-squares fit of target's restriction to the support:
    // columns of K are the known exprs, rows are support atoms.
    CMatrix k_mat(static_cast<int>(support.size()), static_cast<int>(known.size()));
    for (int col = 0; col < k_mat.cols; ++col)
        for (int row = 0; row < k_mat.rows; ++row)
            k_mat.at(row, col) = known[static_cast<std::size_t>(col)].coeff(support[static_cast<std::size_t>(row)]);
    std::vector<Complex> t_restricted(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) t_restricted[i] = target.coeff(support[i]);

    const std::vector<Complex> fit = lstsq_min_norm(k_mat, t_restricted);

    LinExpr result = target;
    for (std::size_t i = 0; i < known.size(); ++i) {
        if (fit[i] == Complex{0.0, 0.0}) continue;
        LinExpr scaled = known[i];
        scaled *= -fit[i];
        result += scaled;
    }
    result.drop_small();
    return result;
}

CoeffSystem coefficient_matrix(std::span<const LinExpr> exprs, std::span<const AtomId> unknowns) {
    std::set<AtomId> seen;
    for (AtomId id : unknowns)
        if (!seen.insert(id).second)
            throw DimensionError("coefficient_matrix: duplicate unknown id");

    CoeffSystem sys;
    sys.matrix = CMatrix(static_cast<int>(exprs.size()), static_cast<int>(unknowns.size()));
    sys.residual.resize(exprs.size());
    for (std::size_t r = 0; r < exprs.size(); ++r) {
        for (const auto& [id, c] : exprs[r].terms()) {
            auto it = std::find(unknowns.begin(), unknowns.end(), id);
            if (it != unknowns.end()) {
                sys.matrix.at(static_cast<int>(r), static_cast<int>(it - unknowns.begin())) = c;
            } else {
                sys.residual[r] += LinExpr::atom(id, c);
            }
        }
    }
    return sys;
}

}  // namespace xcfb
