#pragma once

#include <Eigen/Dense>

#include "splqr/errors.hpp"

namespace splqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative cutoff under which pivots / singular values count as zero.
inline constexpr double kRankTolerance = 1e-10;

/// The n(n+1)/2 distinct entries of a symmetric n x n matrix, stored in
/// upper-triangle row-major order: (0,0),(0,1),...,(0,n-1),(1,1),...,(n-1,n-1).
struct SymVec {
  int n = 0;
  Vector values;

  static int length(int n) { return n * (n + 1) / 2; }
};

/// Kronecker product: block (i,j) of the result is a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Reduce a symmetric matrix to its distinct entries. Requires
/// max|p - p^T| <= 1e-12 * max|p|; the upper triangle wins on ties.
SymVec sym_reduce(const Matrix& p);

/// Expand a SymVec back to the (exactly symmetric) full matrix.
Matrix sym_expand(const SymVec& s);

/// Minimum-norm residual solution of a z = b for a with full column rank,
/// via column-pivoted Householder QR. Throws a rank error (carrying the
/// numerical rank) when a is rank deficient at kRankTolerance.
Vector lstsq(const Matrix& a, const Vector& b);

/// Solve the square system a x = b by LU with full pivoting.
/// `singular_kind` selects the error raised when a is numerically singular.
Matrix solve_linear(const Matrix& a, const Matrix& b,
                    ErrorKind singular_kind = ErrorKind::Rank);

/// True iff a Cholesky factorization of p succeeds with positive pivots.
/// Requires symmetric input.
bool is_posdef(const Matrix& p);

/// Numerical rank: count of singular values above kRankTolerance * largest.
int numerical_rank(const Matrix& a);

/// Reject non-finite entries at module boundaries.
void ensure_finite(const Matrix& a, const char* what);

}  // namespace splqr
