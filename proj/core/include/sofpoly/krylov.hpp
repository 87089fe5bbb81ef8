#pragma once

#include "sofpoly/poly.hpp"
#include "sofpoly/sigma.hpp"
#include "sofpoly/types.hpp"

namespace sofpoly {

/// Full Krylov sequence w0, A w0, ..., A^n w0 of an n x n matrix, stored as
/// the n x (n+1) column matrix (w0 | ... | wn). The first n columns are
/// guaranteed numerically independent (rank-revealing QR at construction);
/// the last column is then a combination of them, which is what pins the
/// annihilating polynomial.
class KrylovSeq {
 public:
  /// Wrap an n x (n+1) column matrix, checking the prefix rank. Throws
  /// DependentPrefixError when the first n columns are rank deficient.
  static KrylovSeq from_columns(Matrix cols, const Tolerance& tol);

  Index dim() const { return cols_.rows(); }
  const Matrix& columns() const { return cols_; }
  Matrix prefix() const { return cols_.leftCols(cols_.rows()); }
  Vector initial() const { return cols_.col(0); }
  Vector last() const { return cols_.col(cols_.cols() - 1); }

 private:
  explicit KrylovSeq(Matrix cols) : cols_(std::move(cols)) {}
  Matrix cols_;
};

/// Iterate w_(j+1) = A w_j from w0. Throws DependentPrefixError when the
/// first n iterates are dependent (the caller resamples w0).
KrylovSeq full_krylov(const Matrix& A, const Vector& w0, const Tolerance& tol);

/// Annihilating (here: characteristic) polynomial from the linear relation
/// (w0 | ... | wn)(dn, ..., d0)^T = 0, solved with d0 fixed to 1 by row-form
/// least squares on the prefix. Unique because the prefix has full rank.
MonicPoly annihilating_from_krylov(const KrylovSeq& K, const Tolerance& tol);

/// Recover the generating matrix: A = (w1 | ... | wn)(w0 | ... | w_(n-1))^-1.
/// Throws ConditioningError when the prefix condition estimate exceeds
/// 1 / tol.rank_tol.
Matrix matrix_from_krylov(const KrylovSeq& K, const Tolerance& tol);

/// Solve (v0 | ... | vn) * sigma_to_toeplitz(s) = (w0 | ... | wn) for the
/// transformed sequence V = W * toeplitz(inverse(s)); v0 = w0. V is the full
/// Krylov sequence of the correspondingly updated matrix. s must have
/// length n+1.
KrylovSeq transform_krylov(const KrylovSeq& K, const SigmaSeq& s,
                           const Tolerance& tol);

}  // namespace sofpoly
