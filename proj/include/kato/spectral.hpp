#pragma once

#include "kato/matrix.hpp"

namespace kato {

enum class SpectralHalf {
    Stable,    // Re mu < 0
    Unstable,  // Re mu > 0
};

inline constexpr double kDefaultGapTol = 1e-8;
inline constexpr double kDefaultIdemTol = 1e-10;

/// A square idempotent matrix together with its rank.
class Projector {
public:
    /// Validates squareness and idempotence,
    /// ||p^2 - p||_F <= idem_tol * (1 + ||p||_F); the rank is trusted.
    Projector(CMatrix p, int rank, double idem_tol = kDefaultIdemTol);

    const CMatrix& matrix() const { return p_; }
    int rank() const { return rank_; }
    Eigen::Index dim() const { return p_.rows(); }

    double idempotence_residual() const;

private:
    CMatrix p_;
    int rank_;
};

/// Orthonormal basis of the invariant subspace of `a` belonging to the
/// eigenvalues in the chosen half-plane.
///
/// Computes a complex Schur form and moves the selected eigenvalues to the
/// leading block with adjacent Givens swaps (ordered Schur), so the leading
/// Schur vectors span the subspace. The eigenvalues keep their relative
/// order. Throws SpectralGapViolation if any eigenvalue has |Re mu| < gap_tol.
CMatrix spectral_split(const CMatrix& a, SpectralHalf half,
                       double gap_tol = kDefaultGapTol);

/// P = R (L* R)^{-1} L*.
///
/// Throws DegenerateDuality when L* R is numerically singular.
Projector eigenprojection(const CMatrix& r_basis, const CMatrix& l_basis);

/// Spectral projector of `a` onto the chosen half: right basis from `a`,
/// left basis from a*, whose matching eigenvalues are the conjugates and so
/// lie in the same half-plane.
Projector stable_projector(const CMatrix& a, SpectralHalf half,
                           double gap_tol = kDefaultGapTol);

}  // namespace kato
