#include "kato/spectral.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kato/errors.hpp"

namespace kato {

namespace {

bool selected(Complex mu, SpectralHalf half) {
    return half == SpectralHalf::Stable ? mu.real() < 0.0 : mu.real() > 0.0;
}

// Swaps the adjacent diagonal entries t(k,k), t(k+1,k+1) of the upper
// triangular t by a unitary rotation, updating the Schur vectors q.
void swap_adjacent(CMatrix& t, CMatrix& q, Eigen::Index k) {
    const Complex t11 = t(k, k);
    const Complex t22 = t(k + 1, k + 1);
    // Eigenvector of the 2x2 block for eigenvalue t22.
    Complex x = t(k, k + 1);
    Complex y = t22 - t11;
    const double len = std::hypot(std::abs(x), std::abs(y));
    if (len == 0.0) {
        return;  // equal eigenvalues with a zero coupling: already "swapped"
    }
    x /= len;
    y /= len;
    // g = [[x, -conj(y)], [y, conj(x)]], unitary with first column the eigenvector.
    CMatrix g(2, 2);
    g << x, -std::conj(y), y, std::conj(x);
    t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
    t.middleCols(k, 2) = t.middleCols(k, 2) * g;
    q.middleCols(k, 2) = q.middleCols(k, 2) * g;
    t(k + 1, k) = Complex(0.0, 0.0);
    t(k, k) = t22;
    t(k + 1, k + 1) = t11;
}

}  // namespace

Projector::Projector(CMatrix p, int rank, double idem_tol) : p_(std::move(p)), rank_(rank) {
    if (p_.rows() != p_.cols()) {
        throw UsageError("Projector: matrix is not square");
    }
    if (rank_ < 0 || rank_ > p_.rows()) {
        throw UsageError("Projector: rank out of range");
    }
    if (!all_finite(p_)) {
        throw NonFiniteState("Projector: non-finite entries");
    }
    const double residual = idempotence_residual();
    if (residual > idem_tol * (1.0 + p_.norm())) {
        std::ostringstream msg;
        msg << "Projector: not idempotent (||P^2-P||_F = " << residual << ")";
        throw NumericalError(msg.str());
    }
}

double Projector::idempotence_residual() const { return (p_ * p_ - p_).norm(); }

CMatrix spectral_split(const CMatrix& a, SpectralHalf half, double gap_tol) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw UsageError("spectral_split: matrix must be square and non-empty");
    }
    if (!all_finite(a)) {
        throw NonFiniteState("spectral_split: non-finite matrix");
    }
    const Eigen::ComplexSchur<CMatrix> schur(a);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("spectral_split: Schur iteration did not converge");
    }
    CMatrix t = schur.matrixT();
    CMatrix q = schur.matrixU();
    const Eigen::Index n = a.rows();

    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(t(i, i).real()) < gap_tol) {
            std::ostringstream msg;
            msg << "spectral_split: eigenvalue " << t(i, i)
                << " within gap tolerance of the imaginary axis";
            throw SpectralGapViolation(msg.str());
        }
    }

    // Stable insertion: bubble each selected eigenvalue up past the
    // unselected ones in front of it.
    Eigen::Index placed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!selected(t(i, i), half)) {
            continue;
        }
        for (Eigen::Index k = i; k > placed; --k) {
            swap_adjacent(t, q, k - 1);
        }
        ++placed;
    }
    return q.leftCols(placed);
}

Projector eigenprojection(const CMatrix& r_basis, const CMatrix& l_basis) {
    if (r_basis.rows() != l_basis.rows() || r_basis.cols() != l_basis.cols()) {
        throw UsageError("eigenprojection: right and left bases differ in shape");
    }
    const auto k = static_cast<int>(r_basis.cols());
    const CMatrix duality = l_basis.adjoint() * r_basis;
    // Pivots are judged against ||L|| ||R||, so nearly orthogonal bases are
    // caught even when L*R is tiny but well conditioned on its own scale.
    const double scale = r_basis.norm() * l_basis.norm();
    const double dual_norm = duality.norm();
    if (dual_norm == 0.0) {
        throw DegenerateDuality("eigenprojection: L*R vanishes");
    }
    CMatrix coeff;
    try {
        coeff = solve(duality, l_basis.adjoint(), kDefaultSingularTol * scale / dual_norm);
    } catch (const SingularMatrix&) {
        throw DegenerateDuality("eigenprojection: L*R is numerically singular");
    }
    return Projector(r_basis * coeff, k);
}

Projector stable_projector(const CMatrix& a, SpectralHalf half, double gap_tol) {
    const CMatrix right = spectral_split(a, half, gap_tol);
    const CMatrix left = spectral_split(a.adjoint(), half, gap_tol);
    if (right.cols() != left.cols()) {
        throw NumericalError("stable_projector: left and right subspace dimensions differ");
    }
    if (right.cols() == 0) {
        return Projector(CMatrix::Zero(a.rows(), a.cols()), 0);
    }
    return eigenprojection(right, left);
}

}  // namespace kato
