#pragma once

#include <complex>
#include <initializer_list>

#include <Eigen/Dense>

namespace kato {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultSingularTol = 1e-12;
inline constexpr double kDefaultRankTol = 1e-12;

/// Builds a matrix from nested row literals. Rows must be non-empty, of
/// equal length, and every entry finite.
CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

CMatrix identity(Eigen::Index n);

bool all_finite(const CMatrix& m);

/// Complex product a*b; throws UsageError on inner-dimension mismatch.
CMatrix matmul(const CMatrix& a, const CMatrix& b);

/// Solves a*x = b with partial-pivot LU. A pivot of magnitude at or below
/// singular_tol*||a||_F raises SingularMatrix.
CMatrix solve(const CMatrix& a, const CMatrix& b,
              double singular_tol = kDefaultSingularTol);

/// Orthonormal basis of range(m), column order following m.
///
/// Householder QR with the phase fixed so that the triangular factor has a
/// nonnegative real diagonal; the first output column is therefore m's first
/// column normalised. A diagonal entry at or below rank_tol*||m||_F raises
/// RankDeficient.
CMatrix orthonormalize(const CMatrix& m, double rank_tol = kDefaultRankTol);

double fro_norm(const CMatrix& m);

/// Number of column-pivoted QR diagonal magnitudes above tol times the
/// largest one. The zero matrix has rank 0.
int numerical_rank(const CMatrix& m, double tol);

}  // namespace kato
