#pragma once

#include "sofpoly/types.hpp"

#include <complex>

namespace sofpoly {

/// Monic polynomial d(s) = s^n + d1 s^(n-1) + ... + dn, stored as the
/// coefficient vector (d0, d1, ..., dn) in descending powers. d0 is kept as
/// exactly 1.0; any drift there is a bug, not a rounding artifact.
class MonicPoly {
 public:
  /// Degree-zero polynomial, d(s) = 1.
  MonicPoly();
  /// coeffs in descending powers; coeffs[0] must be exactly 1 and all
  /// entries finite, otherwise DomainError.
  explicit MonicPoly(Vector coeffs);
  /// Build from the trailing coefficients (d1, ..., dn).
  static MonicPoly from_tail(const Vector& tail);

  Index degree() const { return coeffs_.size() - 1; }
  const Vector& coeffs() const { return coeffs_; }
  /// Trailing coefficients (d1, ..., dn); empty for degree zero.
  Vector tail() const;
  double operator[](Index i) const { return coeffs_[i]; }

  /// Horner evaluation of d at a complex point.
  std::complex<double> eval(std::complex<double> s) const;

 private:
  Vector coeffs_;
};

/// Euclidean distance between coefficient vectors. Degrees must match.
double poly_distance(const MonicPoly& a, const MonicPoly& b);

}  // namespace sofpoly
