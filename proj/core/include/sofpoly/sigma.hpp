#pragma once

#include "sofpoly/poly.hpp"
#include "sofpoly/types.hpp"

namespace sofpoly {

/// Element of the commutative group of unit-diagonal upper-triangular
/// Toeplitz matrices, stored as its defining sequence (1, s1, ..., sk).
/// Multiplication is truncated power-series (polynomial) multiplication
/// mod s^(k+1). The leading entry is kept as exactly 1.0.
class SigmaSeq {
 public:
  /// c[0] must be exactly 1 and all entries finite, otherwise DomainError.
  explicit SigmaSeq(Vector c);
  /// Group identity (1, 0, ..., 0) of the given length (= k+1 >= 1).
  static SigmaSeq identity(Index length);
  /// Build from the trailing entries (s1, ..., sk).
  static SigmaSeq from_tail(const Vector& tail);

  Index length() const { return c_.size(); }     ///< k+1
  Index order() const { return c_.size() - 1; }  ///< k
  const Vector& coeffs() const { return c_; }
  Vector tail() const { return c_.tail(c_.size() - 1); }
  double operator[](Index i) const { return c_[i]; }

 private:
  Vector c_;
};

/// Truncated product mod s^(k+1); both operands must have equal length.
/// Direct O(k^2) convolution; entry 0 of the result is exactly 1.
SigmaSeq sigma_mul(const SigmaSeq& a, const SigmaSeq& b);

/// Group inverse by the forward recurrence inv0 = 1,
/// inv_j = -(a1 inv_(j-1) + ... + aj inv_0).
SigmaSeq sigma_inv(const SigmaSeq& a);

/// The (k+1) x (k+1) matrix form: entry (i,j) = s_(j-i) for j >= i, zero
/// below the diagonal. Maps products to products.
Matrix sigma_to_toeplitz(const SigmaSeq& a);

/// Apply the matrix form to a monic polynomial of degree k through the
/// last-column identity: the result b has reversed coefficient vector
/// sigma_to_toeplitz(a) * (dk, ..., d0)^T. Agrees with multiplying the
/// coefficient sequences, but exercises the matrix route.
MonicPoly sigma_apply_last_column(const SigmaSeq& a, const MonicPoly& d);

/// Multiply a monic polynomial's coefficient sequence by a sigma sequence
/// (truncated at the shared length); the convolution route used by the
/// feedback solvers. Lengths must match: a.length() == d.degree() + 1.
MonicPoly sigma_times_poly(const SigmaSeq& a, const MonicPoly& d);

}  // namespace sofpoly
