#pragma once

#include "sofpoly/poly.hpp"
#include "sofpoly/types.hpp"

namespace sofpoly {

struct LeastSquaresSolution {
  Vector x;              ///< minimizer of || x^T A - b^T ||
  Vector projected_rhs;  ///< x^T A, the projection of b onto the row space of A
  double residual_norm;  ///< || b - projected_rhs ||
  double relative_residual;  ///< residual_norm / ||b||, zero when b = 0
};

/// Row-form least squares: minimize || x^T A - b^T || over x, A is m x n and
/// b has length n. Rank-deficient A yields the minimum-norm minimizer.
/// Backed by a complete orthogonal (QR-type) decomposition, never by normal
/// equations. rank decisions use tol.rank_tol relative to the largest pivot.
LeastSquaresSolution least_squares_row(const Matrix& A, const Vector& b,
                                       const Tolerance& tol);

/// Number of singular values above tol.rank_tol times the largest one.
Index numerical_rank(const Matrix& A, const Tolerance& tol);

/// Orthonormal basis of the (right) kernel of A, one column per kernel
/// dimension; a 0-column matrix when A has full column rank.
Matrix kernel_basis(const Matrix& A, const Tolerance& tol);

/// Companion matrix of a monic polynomial of degree n >= 1: ones on the
/// subdiagonal and last column (-dn, ..., -d1)^T, so that e1, A e1, ...,
/// A^(n-1) e1 are the standard basis vectors and the characteristic
/// polynomial of A is d.
Matrix companion_matrix(const MonicPoly& d);

/// Roots of d as eigenvalues of its companion matrix. For the real
/// coefficients stored here, complex roots are returned in exact conjugate
/// pairs (enforced in post-processing). Degree zero is a DomainError.
ComplexVector poly_roots(const MonicPoly& d);

/// Monic polynomial with the given root multiset. The multiset must be
/// closed under conjugation within `tol` (relative to 1 + |root|), otherwise
/// DomainError; conjugate pairs are symmetrized and expanded as real
/// quadratic factors so the output coefficients are exactly real.
MonicPoly poly_from_roots(const ComplexVector& roots, double tol = 1e-9);

}  // namespace sofpoly
