#include "sofpoly/numerics.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "sofpoly/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

using namespace sofpoly;

namespace {
const Tolerance tol2 = Tolerance::standard(2);
}

TEST_CASE("row least squares on a tall consistent system") {
  // x^T [1 0] = (2, 3): rows can only match the first component; the best x
  // is 2 and the unmatched 3 is pure residual.
  Matrix A(1, 2);
  A << 1.0, 0.0;
  Vector b(2);
  b << 2.0, 3.0;
  const LeastSquaresSolution s = least_squares_row(A, b, tol2);
  REQUIRE(s.x.size() == 1);
  CHECK(s.x[0] == doctest::Approx(2.0));
  CHECK(s.residual_norm == doctest::Approx(3.0));
  CHECK(s.relative_residual == doctest::Approx(3.0 / b.norm()));
  CHECK(s.projected_rhs.isApprox((Vector(2) << 2.0, 0.0).finished(), 1e-12));
}

TEST_CASE("row least squares picks the minimum norm solution when rank deficient") {
  Matrix A(2, 2);
  A << 1.0, 1.0, 1.0, 1.0;
  Vector b(2);
  b << 1.0, 1.0;
  const LeastSquaresSolution s = least_squares_row(A, b, tol2);
  CHECK(s.x[0] == doctest::Approx(0.5));
  CHECK(s.x[1] == doctest::Approx(0.5));
  CHECK(s.residual_norm == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("least squares optimality: the residual is orthogonal to the row space") {
  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const Index rows = rng.uniform_int(1, 5);
    const Index cols = rng.uniform_int(1, 7);
    const Matrix A = rng.uniform_matrix(rows, cols, -2.0, 2.0);
    const Vector b = rng.uniform_vector(cols, -2.0, 2.0);
    const LeastSquaresSolution s = least_squares_row(A, b, Tolerance::standard(cols));
    const Vector r = b - A.transpose() * s.x;
    CHECK((A * r).norm() <= 1e-10 * (1.0 + A.norm() * b.norm()));
    CHECK(s.residual_norm == doctest::Approx(r.norm()).epsilon(1e-10));
  }
}

TEST_CASE("numerical_rank counts significant singular values") {
  CHECK(numerical_rank(Matrix::Identity(4, 4), tol2) == 4);
  CHECK(numerical_rank(Matrix::Zero(3, 3), tol2) == 0);
  Matrix A(2, 2);
  A << 1.0, 1.0, 1.0, 1.0;
  CHECK(numerical_rank(A, tol2) == 1);
}

TEST_CASE("kernel_basis spans the null space orthonormally") {
  Matrix A(1, 2);
  A << 1.0, 1.0;
  const Matrix Z = kernel_basis(A, tol2);
  REQUIRE(Z.cols() == 1);
  CHECK((A * Z).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(Z.col(0).norm() == doctest::Approx(1.0));
  CHECK(std::abs(Z(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));

  Rng rng(33);
  const Matrix B = rng.uniform_matrix(3, 6, -1.0, 1.0);
  const Matrix ZB = kernel_basis(B, Tolerance::standard(6));
  CHECK(ZB.cols() == 3);
  CHECK((B * ZB).norm() <= 1e-12);
  CHECK((ZB.transpose() * ZB - Matrix::Identity(3, 3)).norm() <= 1e-12);

  CHECK(kernel_basis(Matrix::Identity(3, 3), Tolerance::standard(3)).cols() == 0);
}

TEST_CASE("companion matrix realizes its characteristic polynomial") {
  const MonicPoly d = MonicPoly::from_tail((Vector(2) << -3.0, 2.0).finished());
  const Matrix A = companion_matrix(d);
  Matrix expected(2, 2);
  expected << 0.0, -2.0, 1.0, 3.0;
  CHECK(A.isApprox(expected));

  // Against the trace-recurrence oracle on random integer polynomials.
  Rng rng(35);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = rng.uniform_int(1, 8);
    Vector tail(n);
    for (Index i = 0; i < n; ++i) tail[i] = static_cast<double>(rng.uniform_int(-3, 3));
    const MonicPoly p = MonicPoly::from_tail(tail);
    const MonicPoly back = testing::char_poly_reference(companion_matrix(p));
    CHECK(poly_distance(back, p) <= 1e-9 * (1.0 + p.coeffs().norm()));
  }
}

TEST_CASE("poly_roots finds real and complex conjugate roots") {
  const ComplexVector r1 = poly_roots(MonicPoly::from_tail((Vector(2) << -3.0, 2.0).finished()));
  REQUIRE(r1.size() == 2);
  CHECK(r1[0].real() == doctest::Approx(1.0));
  CHECK(r1[1].real() == doctest::Approx(2.0));
  CHECK(std::abs(r1[0].imag()) == 0.0);

  const ComplexVector r2 = poly_roots(MonicPoly::from_tail((Vector(2) << 0.0, 1.0).finished()));
  REQUIRE(r2.size() == 2);
  // exact conjugate pairing, not merely approximate
  CHECK(r2[0].real() == r2[1].real());
  CHECK(r2[0].imag() == -r2[1].imag());
  CHECK(std::abs(r2[0].imag()) == doctest::Approx(1.0));
}

TEST_CASE("poly_from_roots inverts poly_roots") {
  ComplexVector roots(3);
  roots[0] = {1.0, 0.0};
  roots[1] = {2.0, 1.0};
  roots[2] = {2.0, -1.0};
  // (s-1)(s^2-4s+5) = s^3 -5s^2 +9s -5
  const MonicPoly p = poly_from_roots(roots);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(-5.0));
  CHECK(p[2] == doctest::Approx(9.0));
  CHECK(p[3] == doctest::Approx(-5.0));

  Rng rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = rng.uniform_int(1, 7);
    Vector tail = rng.uniform_vector(n, -1.5, 1.5);
    const MonicPoly q = MonicPoly::from_tail(tail);
    const MonicPoly back = poly_from_roots(poly_roots(q));
    CHECK(poly_distance(back, q) <= 1e-7 * (1.0 + q.coeffs().norm()));
  }

  ComplexVector unpaired(1);
  unpaired[0] = {0.0, 1.0};
  CHECK_THROWS_AS(poly_from_roots(unpaired), DomainError);
}
