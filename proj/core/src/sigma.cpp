#include "sofpoly/sigma.hpp"

namespace sofpoly {

SigmaSeq::SigmaSeq(Vector c) : c_(std::move(c)) {
  if (c_.size() < 1) throw DomainError("SigmaSeq: empty sequence");
  if (!c_.allFinite()) throw DomainError("SigmaSeq: non-finite entry");
  if (c_[0] != 1.0) throw DomainError("SigmaSeq: entry 0 must be exactly 1");
}

SigmaSeq SigmaSeq::identity(Index length) {
  if (length < 1) throw DomainError("SigmaSeq: length must be at least 1");
  Vector c = Vector::Zero(length);
  c[0] = 1.0;
  return SigmaSeq(std::move(c));
}

SigmaSeq SigmaSeq::from_tail(const Vector& tail) {
  Vector c(tail.size() + 1);
  c[0] = 1.0;
  c.tail(tail.size()) = tail;
  return SigmaSeq(std::move(c));
}

SigmaSeq sigma_mul(const SigmaSeq& a, const SigmaSeq& b) {
  if (a.length() != b.length()) throw ShapeError("sigma_mul: length mismatch");
  const Index len = a.length();
  Vector out = Vector::Zero(len);
  for (Index i = 0; i < len; ++i)
    for (Index j = 0; i + j < len; ++j) out[i + j] += a[i] * b[j];
  out[0] = 1.0;  // 1*1 is exact, but keep the invariant explicit
  return SigmaSeq(std::move(out));
}

SigmaSeq sigma_inv(const SigmaSeq& a) {
  const Index len = a.length();
  Vector inv = Vector::Zero(len);
  inv[0] = 1.0;
  for (Index j = 1; j < len; ++j) {
    double acc = 0.0;
    for (Index i = 1; i <= j; ++i) acc += a[i] * inv[j - i];
    inv[j] = -acc;
  }
  return SigmaSeq(std::move(inv));
}

Matrix sigma_to_toeplitz(const SigmaSeq& a) {
  const Index len = a.length();
  Matrix T = Matrix::Zero(len, len);
  for (Index i = 0; i < len; ++i)
    for (Index j = i; j < len; ++j) T(i, j) = a[j - i];
  return T;
}

MonicPoly sigma_apply_last_column(const SigmaSeq& a, const MonicPoly& d) {
  if (a.length() != d.degree() + 1)
    throw ShapeError("sigma_apply_last_column: length mismatch");
  const Index len = a.length();
  const Vector rev = d.coeffs().reverse();
  Vector out_rev = sigma_to_toeplitz(a) * rev;
  Vector out = out_rev.reverse();
  out[0] = 1.0;  // last row of the product is exactly d0
  return MonicPoly(std::move(out));
}

MonicPoly sigma_times_poly(const SigmaSeq& a, const MonicPoly& d) {
  if (a.length() != d.degree() + 1)
    throw ShapeError("sigma_times_poly: length mismatch");
  const SigmaSeq prod = sigma_mul(a, SigmaSeq(d.coeffs()));
  return MonicPoly(prod.coeffs());
}

}  // namespace sofpoly
