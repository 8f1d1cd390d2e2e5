#include "xcfb/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include "xcfb/errors.hpp"

namespace xcfb {

Rational x2_sum_dof(int m, int n) {
    if (m < 1 || n < 1) throw DomainError("x2_sum_dof: M, N must be >= 1");
    if (2 * m <= n) return Rational(2 * m);
    if (n <= 2 * m && m <= n) return Rational(4LL * m * n, 2LL * m + n);
    return Rational(4LL * n, 3);
}

OuterBoundResult outer_bound_ok(const Rational& d11, const Rational& d12, const Rational& d22,
                                const Rational& d21, int m, int n) {
    for (const Rational* d : {&d11, &d12, &d22, &d21})
        if (*d < Rational(0)) throw DomainError("outer_bound_ok: negative DoF");
    const Rational wide(std::min(2 * m, 2 * n));
    const Rational narrow(std::min(2 * m, n));
    const Rational lhs1 = (d11 + d21) / wide + (d22 + d12) / narrow;
    const Rational lhs2 = (d11 + d21) / narrow + (d22 + d12) / wide;
    OuterBoundResult res;
    res.slack1 = Rational(1) - lhs1;
    res.slack2 = Rational(1) - lhs2;
    res.ok = lhs1 <= Rational(1) && lhs2 <= Rational(1);
    return res;
}

namespace {

// Row reduction over the foreign columns, at LinExpr level so noise tracks
// exactly. Rows used as pivots are consumed; survivors have no foreign atoms.
std::vector<LinExpr> eliminate_foreign(std::vector<LinExpr> rows,
                                       const std::vector<AtomId>& foreign) {
    std::vector<bool> active(rows.size(), true);
    for (AtomId f : foreign) {
        int pivot = -1;
        double best = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!active[r]) continue;
            const double mag = std::abs(rows[r].coeff(f));
            if (mag > best) {
                best = mag;
                pivot = static_cast<int>(r);
            }
        }
        if (pivot < 0 || best == 0.0) continue;
        active[static_cast<std::size_t>(pivot)] = false;
        const Complex pc = rows[static_cast<std::size_t>(pivot)].coeff(f);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!active[r]) continue;
            const Complex c = rows[r].coeff(f);
            if (c == Complex{0.0, 0.0}) continue;
            LinExpr scaled = rows[static_cast<std::size_t>(pivot)];
            scaled *= -(c / pc);
            rows[r] += scaled;
            rows[r].drop_small();
        }
    }
    std::vector<LinExpr> out;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (active[r] && !rows[r].empty()) out.push_back(std::move(rows[r]));
    return out;
}

}  // namespace

EffectiveSystem build_effective_system(const Transcript& tr, int receiver) {
    EffectiveSystem sys;
    sys.receiver = receiver;
    sys.desired = tr.desired[static_cast<std::size_t>(receiver)];

    // Raw observation stack. Forwarded side information the receiver already
    // holds shows up as foreign rows that are copies of earlier rows, so the
    // foreign column space stays low-rank; no preprocessing is needed for
    // the rank question.
    std::vector<LinExpr> rows;
    for (const auto& rec : tr.slots)
        for (const auto& y : rec.received[static_cast<std::size_t>(receiver)])
            if (!y.empty() && y.has_info_atoms(tr.atoms)) rows.push_back(y);
    sys.rows = rows;

    std::set<AtomId> desired_set(sys.desired.begin(), sys.desired.end());
    std::set<AtomId> foreign_set;
    for (const auto& row : sys.rows)
        for (const auto& [id, c] : row.terms())
            if (tr.atoms[id].kind == AtomKind::InfoSymbol && !desired_set.contains(id))
                foreign_set.insert(id);
    sys.foreign.assign(foreign_set.begin(), foreign_set.end());

    if (sys.desired.empty()) {
        sys.min_sv = sys.max_sv = 1.0;  // nothing to decode
        return sys;
    }

    sys.coeffs = coefficient_matrix(sys.rows, sys.desired).matrix;
    sys.foreign_coeffs = coefficient_matrix(sys.rows, sys.foreign).matrix;

    // Decodability margin: singular values of the desired block projected
    // out of the foreign column space, on row-normalized equations (the
    // receiver may scale each equation freely).
    if (!sys.coeffs.empty()) {
        CMatrix a = sys.coeffs;
        CMatrix f = sys.foreign_coeffs;
        for (std::size_t r = 0; r < sys.rows.size(); ++r) {
            double nrm = 0.0;
            for (const auto& [id, c] : sys.rows[r].terms()) nrm += std::norm(c);
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) continue;
            for (int c = 0; c < a.cols; ++c) a.at(static_cast<int>(r), c) /= nrm;
            for (int c = 0; c < f.cols; ++c) f.at(static_cast<int>(r), c) /= nrm;
        }
        const CMatrix projected = sys.foreign.empty() ? a : project_out_colspace(a, f);
        const auto sv = singular_values(projected);
        sys.max_sv = sv.front();
        sys.min_sv = sv.back();
        if (projected.rows < projected.cols) sys.min_sv = 0.0;  // wide: rank-deficient
    }

    // Foreign-free reduction for the rate computation: subtract the
    // receiver's own earlier outputs from each observation, then spend rows
    // on eliminating whatever foreign symbols remain.
    std::vector<LinExpr> cancelled;
    std::vector<LinExpr> priors;
    for (const auto& rec : tr.slots) {
        const auto& outputs = rec.received[static_cast<std::size_t>(receiver)];
        for (const auto& y : outputs) {
            LinExpr reduced = cancel_known(y, priors);
            if (!reduced.empty() && reduced.has_info_atoms(tr.atoms))
                cancelled.push_back(std::move(reduced));
        }
        priors.insert(priors.end(), outputs.begin(), outputs.end());
    }
    std::vector<LinExpr> reduced =
        sys.foreign.empty() ? std::move(cancelled) : eliminate_foreign(std::move(cancelled), sys.foreign);
    std::erase_if(reduced, [&](const LinExpr& r) { return !r.has_info_atoms(tr.atoms); });
    sys.reduced_rows = std::move(reduced);
    auto cs = coefficient_matrix(sys.reduced_rows, sys.desired);
    sys.reduced_coeffs = std::move(cs.matrix);
    std::set<AtomId> noise_set;
    for (const auto& res : cs.residual)
        for (const auto& [id, c] : res.terms()) noise_set.insert(id);
    sys.reduced_noise_ids.assign(noise_set.begin(), noise_set.end());
    sys.reduced_noise =
        CMatrix(static_cast<int>(sys.reduced_rows.size()), static_cast<int>(sys.reduced_noise_ids.size()));
    for (std::size_t r = 0; r < cs.residual.size(); ++r)
        for (const auto& [id, c] : cs.residual[r].terms()) {
            const auto it = std::lower_bound(sys.reduced_noise_ids.begin(), sys.reduced_noise_ids.end(), id);
            sys.reduced_noise.at(static_cast<int>(r), static_cast<int>(it - sys.reduced_noise_ids.begin())) = c;
        }
    return sys;
}

std::vector<ReceiverVerdict> verify_decodability(const Transcript& tr, double margin_threshold) {
    std::vector<ReceiverVerdict> verdicts;
    for (int rx = 0; rx < tr.config.num_rx; ++rx) {
        ReceiverVerdict v;
        v.receiver = rx;
        const EffectiveSystem sys = build_effective_system(tr, rx);
        if (sys.desired.empty()) {
            v.rank_ok = true;
            v.rank_margin = 1.0;
            v.decode_exact = true;
            verdicts.push_back(std::move(v));
            continue;
        }
        v.rank_margin = sys.rank_margin();
        const bool tall = static_cast<int>(sys.rows.size()) >= static_cast<int>(sys.desired.size());
        v.rank_ok = tall && v.rank_margin > margin_threshold;
        if (!tall) v.detail = "underdetermined: " + std::to_string(sys.rows.size()) + " rows for " +
                              std::to_string(sys.desired.size()) + " symbols";

        if (tr.config.noiseless && v.rank_ok) {
            // Joint minimum-norm solve over desired and foreign columns; the
            // rank margin above guarantees the desired coordinates are pinned.
            std::vector<AtomId> unknowns = sys.desired;
            unknowns.insert(unknowns.end(), sys.foreign.begin(), sys.foreign.end());
            const CMatrix joint = coefficient_matrix(sys.rows, unknowns).matrix;
            std::vector<Complex> rhs(sys.rows.size());
            for (std::size_t r = 0; r < sys.rows.size(); ++r) rhs[r] = sys.rows[r].value(tr.atoms);
            const auto decoded = lstsq_min_norm(joint, rhs);
            v.decode_exact = true;
            for (std::size_t i = 0; i < sys.desired.size(); ++i) {
                const Complex truth = tr.atoms[sys.desired[i]].value;
                if (std::abs(decoded[i] - truth) > 1e-8 * std::max(1.0, std::abs(truth))) {
                    v.decode_exact = false;
                    v.detail = "symbol " + std::to_string(sys.desired[i]) + " decoded off truth";
                    break;
                }
            }
        } else {
            v.decode_exact = tr.config.noiseless ? false : true;
        }
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

std::vector<double> achievable_rate(const Transcript& tr, double power) {
    if (tr.config.noiseless)
        throw ModeError("achievable_rate: transcript has no noise atoms (noiseless run)");
    if (std::abs(power - tr.config.power) > 1e-9 * std::max(1.0, tr.config.power))
        throw DomainError("achievable_rate: power differs from the power the run used");

    std::vector<double> rates;
    const double ln2 = std::log(2.0);
    for (int rx = 0; rx < tr.config.num_rx; ++rx) {
        const EffectiveSystem sys = build_effective_system(tr, rx);
        if (sys.desired.empty() || sys.reduced_rows.empty() || sys.reduced_coeffs.empty()) {
            rates.push_back(0.0);
            continue;
        }
        // Foreign-free rows y = A s + B w with unit-power s and w:
        // I(s; y) = logdet(A A^H + B B^H) - logdet(B B^H).
        const CMatrix a_gram = sys.reduced_coeffs * conj_transpose(sys.reduced_coeffs);
        const CMatrix b_gram = sys.reduced_noise * conj_transpose(sys.reduced_noise);
        const double signal = logdet_hpd(a_gram + b_gram);
        const double noise_only = logdet_hpd(b_gram);
        rates.push_back((signal - noise_only) / ln2 / tr.total_slots());
    }
    return rates;
}

double sum_rate(const Transcript& tr) {
    const auto rates = achievable_rate(tr, tr.config.power);
    double total = 0.0;
    for (double r : rates) total += r;
    return total;
}

namespace {

bool in_span(const LinExpr& expr, std::span<const LinExpr> basis) {
    if (expr.empty()) return true;
    LinExpr res = cancel_known(expr, basis);
    double expr_norm = 0.0;
    for (const auto& [id, c] : expr.terms()) expr_norm += std::norm(c);
    double res_norm = 0.0;
    for (const auto& [id, c] : res.terms()) res_norm += std::norm(c);
    return std::sqrt(res_norm) <= 1e-7 * std::max(1.0, std::sqrt(expr_norm));
}

}  // namespace

CausalityReport audit_causality(const Transcript& tr) {
    CausalityReport report;
    report.ok = true;
    for (int tx = 0; tx < tr.config.num_tx; ++tx) {
        // Own symbols are available from the start.
        std::vector<LinExpr> basis;
        for (std::size_t i = 0; i < tr.atoms.size(); ++i) {
            const SourceAtom& a = tr.atoms[static_cast<AtomId>(i)];
            if (a.kind == AtomKind::InfoSymbol && a.origin_node == tx)
                basis.push_back(LinExpr::atom(a.id));
        }
        const auto parents = tr.config.feedback_parents(tx);
        for (const auto& rec : tr.slots) {
            for (const auto& x : rec.transmitted[static_cast<std::size_t>(tx)]) {
                if (!in_span(x, basis)) {
                    report.ok = false;
                    std::ostringstream os;
                    os << "tx " << tx << " slot " << rec.slot
                       << ": transmission outside span of own symbols and prior feedback";
                    report.detail = os.str();
                    return report;
                }
            }
            // Feedback of this slot becomes usable from the next slot on.
            for (int rx : parents)
                for (const auto& y : rec.received[static_cast<std::size_t>(rx)]) basis.push_back(y);
        }
    }
    return report;
}

CausalityReport audit_partial_feedback_strict(const Transcript& tr) {
    CausalityReport report;
    report.ok = true;
    if (tr.config.feedback != FeedbackMode::Partial) {
        report.ok = false;
        report.detail = "transcript not from a partial-feedback run";
        return report;
    }
    const int phase1 = tr.phase_lengths.empty() ? 0 : tr.phase_lengths.front();
    for (const auto& rec : tr.slots) {
        for (int tx = 0; tx < tr.config.num_tx; ++tx) {
            for (const auto& x : rec.transmitted[static_cast<std::size_t>(tx)]) {
                if (x.empty()) continue;
                if (rec.slot <= phase1) {
                    for (const auto& [id, c] : x.terms()) {
                        const SourceAtom& a = tr.atoms[id];
                        if (a.kind != AtomKind::InfoSymbol || a.origin_node != tx) {
                            report.ok = false;
                            report.detail = "phase-1 transmission not a fresh own symbol (tx " +
                                            std::to_string(tx) + ", slot " + std::to_string(rec.slot) + ")";
                            return report;
                        }
                    }
                    continue;
                }
                // Phase 2: must be a scalar copy of one past output of the
                // transmitter's own receiver.
                bool matched = false;
                for (int past = 1; past < rec.slot && !matched; ++past) {
                    const auto& outputs =
                        tr.slots[static_cast<std::size_t>(past - 1)].received[static_cast<std::size_t>(tx)];
                    for (const auto& y : outputs) {
                        if (y.empty() || y.size() != x.size()) continue;
                        const Complex ratio = x.terms().front().second / y.coeff(x.terms().front().first);
                        LinExpr scaled = y;
                        scaled *= ratio;
                        if (x.approx_equal(scaled, 1e-9 * std::max(1.0, std::abs(ratio)))) {
                            matched = true;
                            break;
                        }
                    }
                }
                if (!matched) {
                    report.ok = false;
                    report.detail = "tx " + std::to_string(tx) + " slot " + std::to_string(rec.slot) +
                                    ": transmission is not a scaled copy of own-receiver feedback";
                    return report;
                }
            }
        }
    }
    return report;
}

double dof_slope(const SchemeRunner& runner, const std::vector<double>& p_grid, int trials,
                 std::uint64_t master_seed, int jobs, std::vector<double>* mean_rates_out) {
    if (p_grid.size() < 2) throw DomainError("dof_slope: need at least two grid points");
    if (!std::is_sorted(p_grid.begin(), p_grid.end()))
        throw DomainError("dof_slope: power grid must be ascending");
    if (trials < 1) throw DomainError("dof_slope: trials must be >= 1");

    std::vector<std::vector<double>> rate(p_grid.size(), std::vector<double>(static_cast<std::size_t>(trials)));
    std::atomic<int> next{0};
    const int total_jobs = trials;
    auto worker = [&]() {
        for (int trial = next.fetch_add(1); trial < total_jobs; trial = next.fetch_add(1)) {
            // One seed per trial, shared by every grid point (common random
            // numbers), so per-trial offsets cancel out of the slope fit.
            const std::uint64_t trial_seed = Rng::split(master_seed, static_cast<std::uint64_t>(trial));
            for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
                const Transcript tr = runner(p_grid[pi], trial_seed);
                rate[pi][static_cast<std::size_t>(trial)] = sum_rate(tr);
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<double> means(p_grid.size(), 0.0);
    for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        double sum = 0.0;
        for (double r : rate[pi]) sum += r;
        means[pi] = sum / trials;
    }
    if (mean_rates_out) *mean_rates_out = means;
    return fit_top_half_slope(p_grid, means);
}

double fit_top_half_slope(const std::vector<double>& p_grid, const std::vector<double>& mean_rates) {
    if (p_grid.size() < 2 || p_grid.size() != mean_rates.size())
        throw DomainError("fit_top_half_slope: need matching grids with >= 2 points");
    const std::size_t start = p_grid.size() / 2;
    const std::size_t count = p_grid.size() - start;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = start; i < p_grid.size(); ++i) {
        mx += std::log2(p_grid[i]);
        my += mean_rates[i];
    }
    mx /= static_cast<double>(count);
    my /= static_cast<double>(count);
    double num = 0.0, den = 0.0;
    for (std::size_t i = start; i < p_grid.size(); ++i) {
        const double dx = std::log2(p_grid[i]) - mx;
        num += dx * (mean_rates[i] - my);
        den += dx * dx;
    }
    return num / den;
}

}  // namespace xcfb
