#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <complex>
#include <vector>

#include "xcfb/cmatrix.hpp"
#include "xcfb/errors.hpp"
#include "xcfb/rational.hpp"
#include "xcfb/rng.hpp"

using namespace xcfb;

namespace {

// Independent determinant oracle: recursive cofactor expansion.
Complex det_cofactor(const CMatrix& a) {
    const int n = a.rows;
    if (n == 1) return a.at(0, 0);
    Complex det{0.0, 0.0};
    double sign = 1.0;
    for (int j = 0; j < n; ++j) {
        CMatrix minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = a.at(r, c);
            }
        }
        det += sign * a.at(0, j) * det_cofactor(minor);
        sign = -sign;
    }
    return det;
}

CMatrix from_rows(const std::vector<std::vector<Complex>>& rows) {
    CMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

}  // namespace

TEST_CASE("gaussian sampling is deterministic under a fixed seed") {
    Rng a(17), b(17);
    const CMatrix ma = gaussian_matrix(1, 1, a);
    const CMatrix mb = gaussian_matrix(1, 1, b);
    CHECK(ma.at(0, 0) == mb.at(0, 0));

    Rng c(18);
    CHECK(gaussian_matrix(1, 1, c).at(0, 0) != ma.at(0, 0));
}

TEST_CASE("gaussian entries have unit second moment") {
    Rng rng(202);
    const CMatrix m = gaussian_matrix(1000, 1000, rng);
    double sum = 0.0;
    for (const auto& e : m.data) sum += std::norm(e);
    const double mean_sq = sum / (1000.0 * 1000.0);
    CHECK(mean_sq > 0.99);
    CHECK(mean_sq < 1.01);
}

TEST_CASE("gaussian matrix shape and dimension errors") {
    Rng rng(3);
    const CMatrix m = gaussian_matrix(2, 3, rng);
    CHECK(m.rows == 2);
    CHECK(m.cols == 3);
    CHECK(m.data.size() == 6);
    CHECK_THROWS_AS(gaussian_matrix(0, 3, rng), DimensionError);
}

TEST_CASE("min singular value on hand-checked matrices") {
    CHECK(min_singular_value(CMatrix::identity(3)) == doctest::Approx(1.0));

    const CMatrix diag = from_rows({{Complex{3, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{4, 0}}});
    CHECK(min_singular_value(diag) == doctest::Approx(3.0));
    CHECK(max_singular_value(diag) == doctest::Approx(4.0));

    // Two equal columns: column-rank deficient.
    const CMatrix dup = from_rows({{Complex{1, 0}, Complex{1, 0}},
                                   {Complex{2, 1}, Complex{2, 1}},
                                   {Complex{0, -3}, Complex{0, -3}}});
    CHECK(min_singular_value(dup) <= 1e-10 * max_singular_value(dup));
    CHECK_FALSE(full_column_rank(dup));
}

TEST_CASE("product of singular values equals |det| for random square matrices") {
    Rng rng(404);
    for (int n = 2; n <= 8; ++n) {
        const CMatrix a = gaussian_matrix(n, n, rng);
        const auto sv = singular_values(a);
        double prod = 1.0;
        for (double s : sv) prod *= s;
        const double det_mag = std::abs(det_cofactor(a));
        CHECK(std::abs(prod - det_mag) <= 1e-6 * det_mag);
    }
}

TEST_CASE("least squares solves consistent systems") {
    std::vector<Complex> b{Complex{1, 2}, Complex{-3, 0.5}};
    const auto x = solve_least_squares(CMatrix::identity(2), b);
    CHECK(std::abs(x[0] - b[0]) < 1e-12);
    CHECK(std::abs(x[1] - b[1]) < 1e-12);

    Rng rng(11);
    const CMatrix a = gaussian_matrix(3, 2, rng);
    std::vector<Complex> truth{Complex{1, 0}, Complex{2, 0}};
    std::vector<Complex> rhs(3);
    for (int r = 0; r < 3; ++r) rhs[static_cast<std::size_t>(r)] = a.at(r, 0) * truth[0] + a.at(r, 1) * truth[1];
    const auto sol = solve_least_squares(a, rhs);
    CHECK(std::abs(sol[0] - truth[0]) < 1e-9);
    CHECK(std::abs(sol[1] - truth[1]) < 1e-9);
}

TEST_CASE("least squares ignores residuals orthogonal to the column space") {
    Rng rng(12);
    const CMatrix a = gaussian_matrix(4, 3, rng);
    std::vector<Complex> x_star{Complex{0.5, -1}, Complex{2, 0.25}, Complex{-1, 1}};
    // b = A x* + r with r = (I - A (A^H A)^{-1} A^H) w, built via the normal
    // equations of an independent 3x3 solve.
    std::vector<Complex> w{Complex{1, 1}, Complex{-2, 0}, Complex{0, 3}, Complex{0.5, -0.5}};
    const CMatrix ah = conj_transpose(a);
    const CMatrix gram = ah * a;  // 3x3
    std::vector<Complex> ahw(3, Complex{0, 0});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) ahw[static_cast<std::size_t>(r)] += ah.at(r, c) * w[static_cast<std::size_t>(c)];
    // Solve gram * y = ahw by cofactor inversion (independent of the kernel).
    const Complex det = det_cofactor(gram);
    CMatrix adj(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            CMatrix minor(2, 2);
            int rr = 0;
            for (int i = 0; i < 3; ++i) {
                if (i == c) continue;
                int cc = 0;
                for (int j = 0; j < 3; ++j) {
                    if (j == r) continue;
                    minor.at(rr, cc++) = gram.at(i, j);
                }
                ++rr;
            }
            const double sign = ((r + c) % 2 == 0) ? 1.0 : -1.0;
            adj.at(r, c) = sign * det_cofactor(minor);
        }
    std::vector<Complex> y(3, Complex{0, 0});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) y[static_cast<std::size_t>(r)] += adj.at(r, c) / det * ahw[static_cast<std::size_t>(c)];
    std::vector<Complex> rhs(4);
    for (int r = 0; r < 4; ++r) {
        Complex ay{0, 0};
        for (int c = 0; c < 3; ++c) ay += a.at(r, c) * y[static_cast<std::size_t>(c)];
        const Complex resid = w[static_cast<std::size_t>(r)] - ay;  // orthogonal to col(A)
        Complex ax{0, 0};
        for (int c = 0; c < 3; ++c) ax += a.at(r, c) * x_star[static_cast<std::size_t>(c)];
        rhs[static_cast<std::size_t>(r)] = ax + resid;
    }
    const auto sol = solve_least_squares(a, rhs);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(sol[static_cast<std::size_t>(i)] - x_star[static_cast<std::size_t>(i)]) < 1e-8);
}

TEST_CASE("least squares residual is orthogonal to the column space") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix a = gaussian_matrix(5, 3, rng);
        std::vector<Complex> b(5);
        for (auto& v : b) v = rng.cgaussian();
        const auto x = solve_least_squares(a, b);
        std::vector<Complex> resid = b;
        for (int r = 0; r < 5; ++r)
            for (int c = 0; c < 3; ++c) resid[static_cast<std::size_t>(r)] -= a.at(r, c) * x[static_cast<std::size_t>(c)];
        const CMatrix ah = conj_transpose(a);
        double norm_a = max_singular_value(a);
        double norm_b = 0.0;
        for (const auto& v : b) norm_b += std::norm(v);
        norm_b = std::sqrt(norm_b);
        for (int r = 0; r < 3; ++r) {
            Complex dot{0, 0};
            for (int c = 0; c < 5; ++c) dot += ah.at(r, c) * resid[static_cast<std::size_t>(c)];
            CHECK(std::abs(dot) <= 1e-8 * norm_a * norm_b);
        }
    }
}

TEST_CASE("least squares rejects rank-deficient systems") {
    const CMatrix dup = from_rows({{Complex{1, 0}, Complex{1, 0}},
                                   {Complex{2, 0}, Complex{2, 0}},
                                   {Complex{3, 0}, Complex{3, 0}}});
    std::vector<Complex> b{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}};
    CHECK_THROWS_AS(solve_least_squares(dup, b), SingularSystemError);
}

TEST_CASE("logdet of Hermitian positive definite matrices") {
    CHECK(logdet_hpd(CMatrix::identity(4)) == doctest::Approx(0.0));

    const CMatrix diag2 = from_rows({{Complex{2, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{2, 0}}});
    CHECK(logdet_hpd(diag2) == doctest::Approx(2.0 * std::log(2.0)));

    // A = M^H M + I matches sum of log(1 + sigma_i^2) of M.
    Rng rng(14);
    const CMatrix m = gaussian_matrix(3, 3, rng);
    const CMatrix a = conj_transpose(m) * m + CMatrix::identity(3);
    const auto sv = singular_values(m);
    double expect = 0.0;
    for (double s : sv) expect += std::log(1.0 + s * s);
    CHECK(std::abs(logdet_hpd(a) - expect) < 1e-9);
}

TEST_CASE("logdet rejects non-HPD inputs") {
    const CMatrix neg = from_rows({{Complex{-1, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{1, 0}}});
    CHECK_THROWS_AS(logdet_hpd(neg), DomainError);
    const CMatrix asym = from_rows({{Complex{1, 0}, Complex{2, 0}}, {Complex{0, 0}, Complex{1, 0}}});
    CHECK_THROWS_AS(logdet_hpd(asym), DomainError);
}

TEST_CASE("random unitary matrices are unitary and seeded") {
    Rng rng(15);
    const CMatrix q = random_unitary(4, rng);
    const CMatrix gram = conj_transpose(q) * q;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const Complex expect = r == c ? Complex{1, 0} : Complex{0, 0};
            CHECK(std::abs(gram.at(r, c) - expect) < 1e-12);
        }
    Rng rng2(15);
    const CMatrix q2 = random_unitary(4, rng2);
    CHECK(q.data == q2.data);
}

TEST_CASE("rng split gives independent reproducible streams") {
    const std::uint64_t s1 = Rng::split(42, 0);
    const std::uint64_t s2 = Rng::split(42, 1);
    CHECK(s1 != s2);
    CHECK(Rng::split(42, 0) == s1);
}

TEST_CASE("rational arithmetic matches integer cross-multiplication") {
    Rng rng(777);
    for (int trial = 0; trial < 500; ++trial) {
        const auto draw = [&]() {
            const std::int64_t num = static_cast<std::int64_t>(rng.next_u64() % 2001) - 1000;
            const std::int64_t den = static_cast<std::int64_t>(rng.next_u64() % 1000) + 1;
            return Rational(num, den);
        };
        const Rational a = draw(), b = draw();
        const Rational sum = a + b;
        // (a/b)+(c/d) = (ad+cb)/(bd) checked by cross-multiplication.
        CHECK(sum.num() * (a.den() * b.den()) == (a.num() * b.den() + b.num() * a.den()) * sum.den());
        const Rational prod = a * b;
        CHECK(prod.num() * (a.den() * b.den()) == (a.num() * b.num()) * prod.den());
        CHECK(std::gcd(std::abs(sum.num()), sum.den()) == 1);
    }
}

TEST_CASE("rational basics") {
    CHECK(Rational(24, 7).str() == "24/7");
    CHECK(Rational(4, 2).str() == "2");
    CHECK(Rational(-6, 4) == Rational(-3, 2));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(3, 2) * Rational(4, 9) == Rational(2, 3));
    CHECK(Rational(1, 2) < Rational(2, 3));
    CHECK_THROWS_AS(Rational(1, 0), DomainError);
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), DomainError);
    CHECK(Rational::harmonic(3) == Rational(11, 6));
    CHECK(Rational::harmonic(4) == Rational(25, 12));
}
