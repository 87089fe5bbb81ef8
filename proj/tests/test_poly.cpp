#include "sofpoly/poly.hpp"

#include "doctest.h"

#include <complex>

using namespace sofpoly;

TEST_CASE("leading coefficient must be exactly one") {
  Vector good(3);
  good << 1.0, -3.0, 2.0;
  CHECK_NOTHROW(MonicPoly{good});

  Vector bad(3);
  bad << 1.0 + 1e-15, -3.0, 2.0;
  CHECK_THROWS_AS(MonicPoly{bad}, DomainError);

  Vector empty(0);
  CHECK_THROWS_AS(MonicPoly{empty}, DomainError);
}

TEST_CASE("default polynomial is the constant one") {
  MonicPoly p;
  CHECK(p.degree() == 0);
  CHECK(p[0] == 1.0);
}

TEST_CASE("from_tail prepends the unit leading coefficient") {
  Vector tail(2);
  tail << -3.0, 2.0;
  const MonicPoly p = MonicPoly::from_tail(tail);
  CHECK(p.degree() == 2);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -3.0);
  CHECK(p[2] == 2.0);
  CHECK(p.tail().isApprox(tail));
}

TEST_CASE("evaluation agrees with the factored form") {
  // s^2 - 3s + 2 = (s - 1)(s - 2)
  const MonicPoly p = MonicPoly::from_tail((Vector(2) << -3.0, 2.0).finished());
  CHECK(std::abs(p.eval({1.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(p.eval({2.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.eval({0.0, 0.0}).real() == doctest::Approx(2.0));
  // (3-1)(3-2) = 2
  CHECK(p.eval({3.0, 0.0}).real() == doctest::Approx(2.0));
  // complex point: (i-1)(i-2) = (i^2) -3i + 2 = 1 - 3i
  const std::complex<double> v = p.eval({0.0, 1.0});
  CHECK(v.real() == doctest::Approx(1.0));
  CHECK(v.imag() == doctest::Approx(-3.0));
}

TEST_CASE("poly_distance is the coefficient l2 distance") {
  const MonicPoly a = MonicPoly::from_tail((Vector(2) << 0.0, 0.0).finished());
  const MonicPoly b = MonicPoly::from_tail((Vector(2) << 3.0, 4.0).finished());
  CHECK(poly_distance(a, b) == doctest::Approx(5.0));
  CHECK(poly_distance(a, a) == 0.0);

  const MonicPoly c = MonicPoly::from_tail((Vector(1) << 1.0).finished());
  CHECK_THROWS_AS(poly_distance(a, c), ShapeError);
}
