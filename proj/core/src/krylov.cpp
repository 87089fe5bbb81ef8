#include "sofpoly/krylov.hpp"

#include "sofpoly/numerics.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace sofpoly {

namespace {

// Rank of M from a rank-revealing (column-pivoted) QR with a relative
// pivot threshold; cheaper than an SVD and sufficient for a yes/no check.
Index qr_rank(const Matrix& M, double rank_tol) {
  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  qr.setThreshold(rank_tol);
  return qr.rank();
}

}  // namespace

KrylovSeq KrylovSeq::from_columns(Matrix cols, const Tolerance& tol) {
  require_finite(cols, "KrylovSeq: columns");
  if (cols.cols() != cols.rows() + 1)
    throw ShapeError("KrylovSeq: expected n x (n+1) column matrix");
  // Column norms grow like ||A||^k and would dominate a rank test on the raw
  // prefix; normalizing first makes the test measure directions only.
  Matrix pre = cols.leftCols(cols.rows());
  for (Index j = 0; j < pre.cols(); ++j) {
    const double nj = pre.col(j).norm();
    if (nj == 0.0)
      throw DependentPrefixError("KrylovSeq: first n columns are rank deficient");
    pre.col(j) /= nj;
  }
  if (qr_rank(pre, tol.rank_tol) != cols.rows())
    throw DependentPrefixError("KrylovSeq: first n columns are rank deficient");
  return KrylovSeq(std::move(cols));
}

KrylovSeq full_krylov(const Matrix& A, const Vector& w0, const Tolerance& tol) {
  if (A.rows() != A.cols()) throw ShapeError("full_krylov: A must be square");
  if (w0.size() != A.rows()) throw ShapeError("full_krylov: w0 length mismatch");
  require_finite(A, "full_krylov: A");
  require_finite(w0, "full_krylov: w0");
  if (w0.norm() == 0.0) throw DomainError("full_krylov: w0 must be nonzero");

  const Index n = A.rows();
  Matrix W(n, n + 1);
  W.col(0) = w0;
  for (Index j = 1; j <= n; ++j) W.col(j) = A * W.col(j - 1);
  if (!W.allFinite()) throw DomainError("full_krylov: iterates overflowed");
  return KrylovSeq::from_columns(std::move(W), tol);
}

MonicPoly annihilating_from_krylov(const KrylovSeq& K, const Tolerance& tol) {
  const Index n = K.dim();
  // (w0 | ... | w_(n-1)) (dn, ..., d1)^T = -wn. Solving against unit-norm
  // columns and rescaling afterwards keeps the factorization from seeing the
  // ||A||^k column growth; the solution itself is unchanged.
  Matrix pre = K.prefix();
  Vector scale(n);
  for (Index j = 0; j < n; ++j) {
    scale[j] = pre.col(j).norm();
    pre.col(j) /= scale[j];  // from_columns guarantees nonzero columns
  }
  const LeastSquaresSolution ls = least_squares_row(pre.transpose(), -K.last(), tol);
  Vector tail(n);
  for (Index i = 0; i < n; ++i)
    tail[i] = ls.x[n - 1 - i] / scale[n - 1 - i];  // x = (dn, ..., d1) scaled
  return MonicPoly::from_tail(tail);
}

Matrix matrix_from_krylov(const KrylovSeq& K, const Tolerance& tol) {
  const Index n = K.dim();
  // A (w0|...|w_(n-1)) = (w1|...|wn), transposed so QR solves column-form.
  // Equation k pairs w_k with w_(k+1); dividing both by ||w_k|| equilibrates
  // the rows without changing the solution.
  Matrix lhs = K.prefix().transpose();
  Matrix rhs = K.columns().rightCols(n).transpose();
  for (Index k = 0; k < n; ++k) {
    const double s = lhs.row(k).norm();
    lhs.row(k) /= s;
    rhs.row(k) /= s;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(lhs);
  qr.setThreshold(tol.rank_tol);
  const Vector diag = qr.matrixR().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  // Pivoted-QR diagonal ratio as the condition estimate for the basis solve.
  if (dmin == 0.0 || dmax / dmin > 1.0 / tol.rank_tol)
    throw ConditioningError("matrix_from_krylov: prefix too ill-conditioned");
  return qr.solve(rhs).transpose();
}

KrylovSeq transform_krylov(const KrylovSeq& K, const SigmaSeq& s,
                           const Tolerance& tol) {
  if (s.length() != K.dim() + 1)
    throw ShapeError("transform_krylov: sequence length must be n+1");
  const Matrix V = K.columns() * sigma_to_toeplitz(sigma_inv(s));
  return KrylovSeq::from_columns(V, tol);
}

}  // namespace sofpoly
