#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "xcfb/errors.hpp"
#include "xcfb/ledger.hpp"
#include "xcfb/rng.hpp"

using namespace xcfb;

namespace {

AtomTable three_atoms() {
    AtomTable atoms;
    atoms.add_info_symbol(0, 1, 0, 0, Complex{1, 0});   // id 0
    atoms.add_info_symbol(1, 1, 0, 0, Complex{2, 0});   // id 1
    atoms.add_noise(0, 1, 0, Complex{0.1, 0});          // id 2
    return atoms;
}

LinExpr random_expr(Rng& rng, int max_atom) {
    LinExpr e;
    for (AtomId id = 0; id <= max_atom; ++id)
        if (rng.uniform() < 0.6) e += LinExpr::atom(id, rng.cgaussian());
    return e;
}

}  // namespace

TEST_CASE("combine forms exact linear combinations") {
    const LinExpr u = LinExpr::atom(0);
    const LinExpr v = LinExpr::atom(1);

    std::vector<Complex> ones{Complex{1, 0}, Complex{1, 0}};
    std::vector<LinExpr> exprs{u, v};
    const LinExpr sum = combine(ones, exprs);
    CHECK(sum.size() == 2);
    CHECK(sum.coeff(0) == Complex{1, 0});
    CHECK(sum.coeff(1) == Complex{1, 0});

    std::vector<Complex> zero{Complex{0, 0}};
    std::vector<LinExpr> single{u};
    CHECK(combine(zero, single).empty());

    std::vector<Complex> pm{Complex{2, 0}, Complex{-2, 0}};
    std::vector<LinExpr> twice{u, u};
    CHECK(combine(pm, twice).empty());

    std::vector<Complex> short_list{Complex{1, 0}};
    CHECK_THROWS_AS(combine(short_list, exprs), DimensionError);
}

TEST_CASE("combine is linear") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const LinExpr a = random_expr(rng, 6);
        const LinExpr b = random_expr(rng, 6);
        const Complex alpha = rng.cgaussian();
        std::vector<Complex> coeffs{alpha, alpha};
        std::vector<LinExpr> exprs{a, b};
        const LinExpr lhs = combine(coeffs, exprs);
        LinExpr rhs = a + b;
        rhs *= alpha;
        CHECK(lhs.approx_equal(rhs, 1e-12));
    }
}

TEST_CASE("cancel_known removes exactly the reachable side information") {
    // target = u~ + v~, known = [v~]  ->  u~
    LinExpr u_tilde;
    u_tilde += LinExpr::atom(0, Complex{0.7, 0.1});
    u_tilde += LinExpr::atom(1, Complex{-1.2, 0.4});
    LinExpr v_tilde;
    v_tilde += LinExpr::atom(2, Complex{0.3, -0.9});
    v_tilde += LinExpr::atom(3, Complex{1.1, 0.0});

    const LinExpr target = u_tilde + v_tilde;
    std::vector<LinExpr> known{v_tilde};
    const LinExpr out = cancel_known(target, known);
    CHECK(out.approx_equal(u_tilde, 1e-10));

    // target = e, known = [e] -> empty
    std::vector<LinExpr> self{target};
    CHECK(cancel_known(target, self).empty());
}

TEST_CASE("cancel_known leaves atoms outside the span untouched") {
    // target over {a, b}, known spans only {b}: 2a + 3b - (3/5) * 5b = 2a.
    LinExpr target;
    target += LinExpr::atom(0, Complex{2, 0});
    target += LinExpr::atom(1, Complex{3, 0});
    std::vector<LinExpr> known{LinExpr::atom(1, Complex{5, 0})};
    const LinExpr out = cancel_known(target, known);
    CHECK(out.size() == 1);
    CHECK(out.coeff(0) == Complex{2, 0});
}

TEST_CASE("cancel_known never introduces new atoms") {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        const LinExpr target = random_expr(rng, 9);
        std::vector<LinExpr> known;
        for (int k = 0; k < 3; ++k) known.push_back(random_expr(rng, 9));
        const LinExpr out = cancel_known(target, known);
        for (const auto& [id, c] : out.terms()) {
            bool present = target.coeff(id) != Complex{0, 0};
            for (const auto& kn : known) present = present || kn.coeff(id) != Complex{0, 0};
            CHECK(present);
        }
    }
}

TEST_CASE("coefficient_matrix splits unknowns from residual") {
    LinExpr e;
    e += LinExpr::atom(0, Complex{2, 0});
    e += LinExpr::atom(1, Complex{3, 0});
    std::vector<LinExpr> exprs{e};
    std::vector<AtomId> unknowns{0, 1};
    const auto sys = coefficient_matrix(exprs, unknowns);
    CHECK(sys.matrix.rows == 1);
    CHECK(sys.matrix.cols == 2);
    CHECK(sys.matrix.at(0, 0) == Complex{2, 0});
    CHECK(sys.matrix.at(0, 1) == Complex{3, 0});
    CHECK(sys.residual[0].empty());

    // a + z over unknowns [a]: residual carries the noise atom.
    LinExpr noisy;
    noisy += LinExpr::atom(0, Complex{1, 0});
    noisy += LinExpr::atom(7, Complex{1, 0});
    std::vector<LinExpr> exprs2{noisy};
    std::vector<AtomId> just_a{0};
    const auto sys2 = coefficient_matrix(exprs2, just_a);
    CHECK(sys2.matrix.at(0, 0) == Complex{1, 0});
    CHECK(sys2.residual[0].size() == 1);
    CHECK(sys2.residual[0].coeff(7) == Complex{1, 0});

    std::vector<AtomId> dup{0, 0};
    CHECK_THROWS_AS(coefficient_matrix(exprs, dup), DimensionError);
}

TEST_CASE("expression power uses atom powers") {
    const AtomTable atoms = three_atoms();
    LinExpr e;
    e += LinExpr::atom(0, Complex{3, 4});  // |c|^2 = 25
    e += LinExpr::atom(2, Complex{0, 2});  // |c|^2 = 4, unit noise power
    CHECK(e.expr_power(atoms) == doctest::Approx(29.0));
}

TEST_CASE("expression values follow the sampled atoms") {
    const AtomTable atoms = three_atoms();
    LinExpr e;
    e += LinExpr::atom(0, Complex{2, 0});
    e += LinExpr::atom(1, Complex{1, 0});
    CHECK(std::abs(e.value(atoms) - Complex{4, 0}) < 1e-15);
}

TEST_CASE("drop_small removes only negligible coefficients") {
    LinExpr e;
    e += LinExpr::atom(0, Complex{1.0, 0});
    e += LinExpr::atom(1, Complex{1e-12, 0});
    e.drop_small();
    CHECK(e.size() == 1);
    CHECK(e.coeff(0) == Complex{1.0, 0});
}
