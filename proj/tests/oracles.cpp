#include "oracles.hpp"

namespace sofpoly::testing {

MonicPoly char_poly_reference(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw ShapeError("char_poly_reference: square matrix required");
  const Index n = A.rows();
  Vector tail(n);
  Matrix M = Matrix::Identity(n, n);
  double ck = -(A * M).trace();
  tail[0] = ck;
  for (Index k = 2; k <= n; ++k) {
    M = A * M + ck * Matrix::Identity(n, n);
    ck = -(A * M).trace() / static_cast<double>(k);
    tail[k - 1] = ck;
  }
  return MonicPoly::from_tail(tail);
}

Matrix eval_poly_at_matrix(const MonicPoly& d, const Matrix& A) {
  if (A.rows() != A.cols())
    throw ShapeError("eval_poly_at_matrix: square matrix required");
  const Index n = A.rows();
  Matrix R = Matrix::Identity(n, n);
  for (Index i = 1; i <= d.degree(); ++i)
    R = R * A + d[i] * Matrix::Identity(n, n);
  return R;
}

Vector conv_reference(const Vector& a, const Vector& b, Index out_len) {
  Vector out = Vector::Zero(out_len);
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < b.size(); ++j)
      if (i + j < out_len) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace sofpoly::testing
