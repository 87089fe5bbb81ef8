#include "sofpoly/poly.hpp"

namespace sofpoly {

MonicPoly::MonicPoly() : coeffs_(Vector::Ones(1)) {}

MonicPoly::MonicPoly(Vector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 1) throw DomainError("MonicPoly: empty coefficient vector");
  if (!coeffs_.allFinite()) throw DomainError("MonicPoly: non-finite coefficient");
  if (coeffs_[0] != 1.0) throw DomainError("MonicPoly: leading coefficient must be exactly 1");
}

MonicPoly MonicPoly::from_tail(const Vector& tail) {
  Vector c(tail.size() + 1);
  c[0] = 1.0;
  c.tail(tail.size()) = tail;
  return MonicPoly(std::move(c));
}

Vector MonicPoly::tail() const { return coeffs_.tail(coeffs_.size() - 1); }

std::complex<double> MonicPoly::eval(std::complex<double> s) const {
  std::complex<double> acc = coeffs_[0];
  for (Index i = 1; i < coeffs_.size(); ++i) acc = acc * s + coeffs_[i];
  return acc;
}

double poly_distance(const MonicPoly& a, const MonicPoly& b) {
  if (a.degree() != b.degree()) throw ShapeError("poly_distance: degree mismatch");
  return (a.coeffs() - b.coeffs()).norm();
}

}  // namespace sofpoly
