#include "kato/matrix.hpp"

#include <cmath>
#include <string>

#include "kato/errors.hpp"

namespace kato {

namespace {

std::string shape(const CMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    if (rows.size() == 0 || rows.begin()->size() == 0) {
        throw UsageError("from_rows: empty matrix");
    }
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = static_cast<Eigen::Index>(rows.begin()->size());
    CMatrix m(n_rows, n_cols);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw UsageError("from_rows: ragged rows");
        }
        Eigen::Index j = 0;
        for (const Complex& z : row) {
            m(i, j++) = z;
        }
        ++i;
    }
    if (!all_finite(m)) {
        throw UsageError("from_rows: non-finite entry");
    }
    return m;
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw UsageError("matmul: cannot multiply " + shape(a) + " by " + shape(b));
    }
    return a * b;
}

CMatrix solve(const CMatrix& a, const CMatrix& b, double singular_tol) {
    if (a.rows() != a.cols()) {
        throw UsageError("solve: matrix is " + shape(a) + ", not square");
    }
    if (b.rows() != a.rows()) {
        throw UsageError("solve: right-hand side is " + shape(b) + " for " + shape(a));
    }
    const Eigen::PartialPivLU<CMatrix> lu(a);
    const double threshold = singular_tol * a.norm();
    const CMatrix& packed = lu.matrixLU();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (std::abs(packed(i, i)) <= threshold) {
            throw SingularMatrix("solve: pivot " + std::to_string(i) +
                                 " below singular tolerance");
        }
    }
    return lu.solve(b);
}

CMatrix orthonormalize(const CMatrix& m, double rank_tol) {
    if (m.cols() > m.rows()) {
        throw RankDeficient("orthonormalize: more columns than rows (" + shape(m) + ")");
    }
    const Eigen::HouseholderQR<CMatrix> qr(m);
    const CMatrix& packed = qr.matrixQR();
    const Eigen::Index k = m.cols();
    const double threshold = rank_tol * m.norm();
    CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Complex d = packed(j, j);
        const double mag = std::abs(d);
        if (mag <= threshold || mag == 0.0) {
            throw RankDeficient("orthonormalize: column " + std::to_string(j) +
                                " is numerically dependent");
        }
        // m = Q R; rescaling column j of Q by phase(d) makes R(j,j) = |d|.
        q.col(j) *= d / mag;
    }
    return q;
}

double fro_norm(const CMatrix& m) { return m.norm(); }

int numerical_rank(const CMatrix& m, double tol) {
    if (m.size() == 0) {
        return 0;
    }
    const Eigen::ColPivHouseholderQR<CMatrix> qr(m);
    const CMatrix& packed = qr.matrixQR();
    const Eigen::Index diag = std::min(m.rows(), m.cols());
    double largest = 0.0;
    for (Eigen::Index i = 0; i < diag; ++i) {
        largest = std::max(largest, std::abs(packed(i, i)));
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < diag; ++i) {
        if (std::abs(packed(i, i)) > tol * largest) {
            ++rank;
        }
    }
    return rank;
}

}  // namespace kato
