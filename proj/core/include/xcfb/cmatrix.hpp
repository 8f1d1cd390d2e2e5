#pragma once

#include <complex>
#include <span>
#include <vector>

#include "xcfb/rng.hpp"

namespace xcfb {

// Dense complex matrix, row-major. Minimal kernel shared by the ledger,
// channel environment and analysis code; heavy lifting (SVD, QR, Cholesky)
// is delegated to Eigen behind this interface.
struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> data;  // rows * cols entries, row-major

    CMatrix() = default;
    CMatrix(int r, int c);

    static CMatrix identity(int n);

    Complex& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const Complex& at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    bool empty() const { return rows == 0 || cols == 0; }
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix conj_transpose(const CMatrix& a);

// Matrix with i.i.d. CN(0,1) entries, filled row-major from `rng`.
CMatrix gaussian_matrix(int rows, int cols, Rng& rng);

// Haar-style random unitary (QR of a Gaussian draw, phases fixed).
// Generic like a Gaussian draw but perfectly conditioned.
CMatrix random_unitary(int n, Rng& rng);

// Singular values in descending order.
std::vector<double> singular_values(const CMatrix& a);
double min_singular_value(const CMatrix& a);
double max_singular_value(const CMatrix& a);

// Relative, dimension-aware full-column-rank test:
// sigma_min > 1e-8 * sigma_max * max(rows, cols).
bool full_column_rank(const CMatrix& a);

// Unique least-squares minimizer of ||A x - b||; requires full column rank.
std::vector<Complex> solve_least_squares(const CMatrix& a, std::span<const Complex> b);

// Minimum-norm least-squares solution; tolerates rank deficiency.
// Internal helper for side-information elimination.
std::vector<Complex> lstsq_min_norm(const CMatrix& a, std::span<const Complex> b);

// log det(A) for Hermitian positive definite A, via Cholesky.
double logdet_hpd(const CMatrix& a);

// Projects the columns of `target` onto the orthogonal complement of the
// column space of `basis` (numerical rank via the relative threshold).
// Empty basis returns target unchanged.
CMatrix project_out_colspace(const CMatrix& target, const CMatrix& basis);

}  // namespace xcfb
