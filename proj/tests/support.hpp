#pragma once

// Test-only helpers and independent oracles. Nothing here calls the code
// paths it is used to check.

#include <Eigen/Eigenvalues>

#include "kato/matrix.hpp"
#include "kato/problems.hpp"
#include "kato/spectral.hpp"

namespace kato::test {

inline double rel_diff(const CMatrix& a, const CMatrix& b) {
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// Well-conditioned random square matrix: I + c G / sqrt(n).
inline CMatrix well_conditioned(SeededSource& src, Eigen::Index n, double c = 0.3) {
    return identity(n) + (c / std::sqrt(static_cast<double>(n))) * src.matrix(n, n);
}

/// A = V diag(mu) V^{-1} with eigenvalues at least `gap` away from the
/// imaginary axis; the first `stable` eigenvalues have negative real part.
inline CMatrix random_split_matrix(SeededSource& src, Eigen::Index n, Eigen::Index stable,
                                   double gap) {
    Eigen::VectorXcd mu(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = gap + 1.5 * src.unit();
        mu(i) = Complex(i < stable ? -re : re, 2.0 * src.symmetric());
    }
    const CMatrix v = well_conditioned(src, n);
    return v * mu.asDiagonal() * v.inverse();
}

/// Spectral projector from an explicit eigendecomposition,
/// P = V diag(1[mu in half]) V^{-1}. Independent of the Schur route.
inline CMatrix eig_projector(const CMatrix& a, SpectralHalf half) {
    const Eigen::ComplexEigenSolver<CMatrix> es(a);
    const CMatrix v = es.eigenvectors();
    Eigen::VectorXcd select(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double re = es.eigenvalues()(i).real();
        select(i) = (half == SpectralHalf::Stable ? re < 0.0 : re > 0.0) ? 1.0 : 0.0;
    }
    return v * select.asDiagonal() * v.inverse();
}

// Explicit n x n step matrices, written term by term from the scheme
// definitions. Used to check the frame-based implementations.
struct StepMatrices {
    static CMatrix greedy1(const CMatrix& p1) { return p1; }
    static CMatrix brz1(const CMatrix& p0, const CMatrix& p1) {
        const CMatrix i = identity(p0.rows());
        return p1 * (i + p0 * (i - p1));
    }
    static CMatrix greedy2(const CMatrix& p0, const CMatrix& p1) {
        const CMatrix i = identity(p0.rows());
        return p1 * (i + 0.5 * p0 * (i - p1));
    }
    static CMatrix rich2(const CMatrix& ph, const CMatrix& p1) {
        const CMatrix i = identity(p1.rows());
        return p1 * (2.0 * ph - i);
    }
    static CMatrix rich3(const CMatrix& pq, const CMatrix& ph, const CMatrix& p3q, const CMatrix& p1) {
        const CMatrix i = identity(p1.rows());
        return p1 * ((4.0 / 3.0) * (2.0 * p3q - i) * ph * (2.0 * pq - i) - (1.0 / 3.0) * (2.0 * ph - i));
    }
    static CMatrix greedy3(const CMatrix& p0, const CMatrix& ph, const CMatrix& p1) {
        const CMatrix i = identity(p1.rows());
        return p1 * ((4.0 / 3.0) * (i + 0.5 * ph * (i - p1)) * ph * (i + 0.5 * p0 * (i - ph)) -
                     (1.0 / 3.0) * (i + 0.5 * p0 * (i - p1)));
    }
};

}  // namespace kato::test
