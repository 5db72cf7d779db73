#pragma once

// Numerical linear algebra for the toolkit.
//
// Singular values are computed in two independent ways:
//
//  * singular_values(): Householder bidiagonalization followed by bisection
//    with Sturm counts on the symmetric tridiagonal
//        [ 0 d1; d1 0 e1; e1 0 d2; ... ]
//    whose eigenvalues are exactly {+-sigma_i} of the bidiagonal factor.
//    Values-only (no U/V accumulation), O(N n^2) + O(n^2 log(1/tol)),
//    robust: bisection cannot fail to converge, and small singular values
//    are determined to high relative accuracy by the bidiagonal data.
//
//  * jacobi_singular_values(): one-sided Jacobi column orthogonalization.
//    Slower; kept as an algorithmically independent cross-check for tests.
//
// The residual field of SpectrumResult is an a priori relative backward
// error bound: the computed values are the exact singular values of some
// A + E with ||E|| <= residual * sigma_1. It is far below 1e-10 for every
// dimension this toolkit targets.

#include <cstddef>
#include <vector>

#include "sigmin/matrix.hpp"

namespace sigmin::linalg {

struct SpectrumResult {
  std::vector<double> singular_values;  // descending, size min(N, n)
  double residual = 0.0;                // relative backward error bound
};

SpectrumResult singular_values(const Matrix& A);

// Smallest singular value only (skips the larger bisections).
double smallest_singular_value(const Matrix& A);

// Independent cross-check: one-sided Jacobi, descending values.
std::vector<double> jacobi_singular_values(const Matrix& A);

struct SubspaceBasis {
  std::vector<Vector> q;   // orthonormal vectors spanning the subspace
  std::size_t rank = 0;    // achieved rank (q.size())
  std::size_t requested = 0;  // number of input vectors
};

// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
// residual after projection falls below 1e-12 * (largest input norm) are
// treated as dependent and dropped; the achieved rank is recorded.
SubspaceBasis orthonormal_basis(const std::vector<Vector>& vectors);

// Euclidean distance from v to span(basis).
double dist_to_subspace(const Vector& v, const SubspaceBasis& basis);

// Distance from v to the set of k-sparse vectors: the Euclidean norm of v
// with its k largest-magnitude coordinates removed.
double dist_to_sparse(const Vector& v, std::size_t k);

// For square nonsingular A, the distance from column j to the span of the
// other columns equals 1 / |A^{-T} e_j|. Returns the n distances, or an
// empty vector when the LU factorization detects (numerical) singularity;
// callers fall back to orthonormal_basis / dist_to_subspace.
std::vector<double> column_to_others_distances(const Matrix& A);

// Columns keep_cols of A projected onto the orthogonal complement of the
// span of all the other columns. Result has one column per entry of
// keep_cols (order preserved). rank_deficient is set when the "other"
// columns do not have full rank (their span was still used as computed).
struct ProjectedColumns {
  Matrix W;
  bool complement_full_rank = true;
};
ProjectedColumns project_out_columns(const Matrix& A,
                                     const std::vector<std::size_t>& keep_cols);

}  // namespace sigmin::linalg
