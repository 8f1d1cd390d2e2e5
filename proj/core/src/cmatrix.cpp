#include "xcfb/cmatrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "xcfb/errors.hpp"

namespace xcfb {
namespace {

using EMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<const EMatrix>;
using EVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

EMap map(const CMatrix& a) {
    return EMap(a.data.data(), a.rows, a.cols);
}

void require_nonempty(const CMatrix& a, const char* op) {
    if (a.empty()) throw DimensionError(std::string(op) + ": empty matrix");
}

CMatrix from_eigen(const EMatrix& m) {
    CMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    EMatrix::Map(out.data.data(), m.rows(), m.cols()) = m;
    return out;
}

}  // namespace

CMatrix::CMatrix(int r, int c) : rows(r), cols(c) {
    if (r < 0 || c < 0) throw DimensionError("CMatrix: negative dimension");
    data.assign(static_cast<std::size_t>(r) * c, Complex{0.0, 0.0});
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Complex{1.0, 0.0};
    return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows) throw DimensionError("matrix product: inner dimensions differ");
    return from_eigen(map(a) * map(b));
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("matrix sum: shape mismatch");
    return from_eigen(map(a) + map(b));
}

CMatrix conj_transpose(const CMatrix& a) {
    return from_eigen(map(a).adjoint());
}

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
    if (rows < 1 || cols < 1) throw DimensionError("gaussian_matrix: dimensions must be >= 1");
    CMatrix m(rows, cols);
    for (auto& e : m.data) e = rng.cgaussian();
    return m;
}

CMatrix random_unitary(int n, Rng& rng) {
    const CMatrix g = gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<EMatrix> qr(map(g));
    EMatrix q = qr.householderQ();
    const EMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(i) *= d / mag;
    }
    return from_eigen(q);
}

std::vector<double> singular_values(const CMatrix& a) {
    require_nonempty(a, "singular_values");
    Eigen::JacobiSVD<EMatrix> svd(map(a));
    const auto& sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

double min_singular_value(const CMatrix& a) {
    // min over the full set of min(rows, cols) values; 0 when column-rank
    // deficient only if cols <= rows, so callers check shape separately.
    auto sv = singular_values(a);
    return sv.back();
}

double max_singular_value(const CMatrix& a) {
    return singular_values(a).front();
}

bool full_column_rank(const CMatrix& a) {
    require_nonempty(a, "full_column_rank");
    if (a.rows < a.cols) return false;
    auto sv = singular_values(a);
    return sv.back() > 1e-8 * sv.front() * std::max(a.rows, a.cols);
}

std::vector<Complex> solve_least_squares(const CMatrix& a, std::span<const Complex> b) {
    require_nonempty(a, "solve_least_squares");
    if (static_cast<int>(b.size()) != a.rows)
        throw DimensionError("solve_least_squares: rhs length != rows");
    if (!full_column_rank(a))
        throw SingularSystemError("solve_least_squares: matrix is column-rank deficient");
    Eigen::Map<const EVector> rhs(b.data(), b.size());
    EVector x = map(a).colPivHouseholderQr().solve(rhs);
    return std::vector<Complex>(x.data(), x.data() + x.size());
}

std::vector<Complex> lstsq_min_norm(const CMatrix& a, std::span<const Complex> b) {
    require_nonempty(a, "lstsq_min_norm");
    if (static_cast<int>(b.size()) != a.rows)
        throw DimensionError("lstsq_min_norm: rhs length != rows");
    Eigen::Map<const EVector> rhs(b.data(), b.size());
    Eigen::CompleteOrthogonalDecomposition<EMatrix> cod(map(a));
    EVector x = cod.solve(rhs);
    return std::vector<Complex>(x.data(), x.data() + x.size());
}

CMatrix project_out_colspace(const CMatrix& target, const CMatrix& basis) {
    if (basis.empty()) return target;
    if (basis.rows != target.rows)
        throw DimensionError("project_out_colspace: row count mismatch");
    Eigen::JacobiSVD<EMatrix> svd(map(basis), Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * (sv.size() ? sv(0) : 0.0) * std::max(basis.rows, basis.cols);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    if (rank == 0) return target;
    const auto q = svd.matrixU().leftCols(rank);
    return from_eigen(map(target) - q * (q.adjoint() * map(target)));
}

double logdet_hpd(const CMatrix& a) {
    require_nonempty(a, "logdet_hpd");
    if (a.rows != a.cols) throw DomainError("logdet_hpd: matrix not square");
    // Hermitian check with a scale-relative tolerance.
    double scale = 0.0;
    for (const auto& e : a.data) scale = std::max(scale, std::abs(e));
    for (int i = 0; i < a.rows; ++i)
        for (int j = i; j < a.cols; ++j)
            if (std::abs(a.at(i, j) - std::conj(a.at(j, i))) > 1e-9 * std::max(1.0, scale))
                throw DomainError("logdet_hpd: matrix not Hermitian");
    Eigen::LLT<EMatrix> llt(map(a).selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success)
        throw DomainError("logdet_hpd: matrix not positive definite");
    double logdet = 0.0;
    const auto& l = llt.matrixLLT();
    for (int i = 0; i < a.rows; ++i) logdet += std::log(std::real(l(i, i)));
    return 2.0 * logdet;
}

}  // namespace xcfb
