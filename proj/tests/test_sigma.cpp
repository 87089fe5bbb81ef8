#include "sofpoly/sigma.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "sofpoly/rng.hpp"

using namespace sofpoly;

namespace {

SigmaSeq random_sigma(Rng& rng, Index order) {
  return SigmaSeq::from_tail(rng.uniform_vector(order, -1.5, 1.5));
}

}  // namespace

TEST_CASE("sequences start with exactly one") {
  Vector ok(3);
  ok << 1.0, 0.5, -0.5;
  CHECK_NOTHROW(SigmaSeq{ok});
  Vector bad(3);
  bad << 0.999999, 0.5, -0.5;
  CHECK_THROWS_AS(SigmaSeq{bad}, DomainError);
}

TEST_CASE("identity behaves as the neutral element") {
  Rng rng(41);
  const SigmaSeq a = random_sigma(rng, 6);
  const SigmaSeq e = SigmaSeq::identity(7);
  CHECK(sigma_mul(a, e).coeffs().isApprox(a.coeffs()));
  CHECK(sigma_mul(e, a).coeffs().isApprox(a.coeffs()));
}

TEST_CASE("worked products and inverses") {
  const SigmaSeq a = SigmaSeq::from_tail((Vector(2) << 2.0, 1.0).finished());
  const SigmaSeq b = SigmaSeq::from_tail((Vector(2) << -2.0, 3.0).finished());
  const SigmaSeq ab = sigma_mul(a, b);
  CHECK(ab.coeffs()[0] == 1.0);
  CHECK(ab.coeffs()[1] == doctest::Approx(0.0));
  CHECK(ab.coeffs()[2] == doctest::Approx(0.0));

  // (1,1,1,1)^-1 = (1,-1,0,0)
  const SigmaSeq c = SigmaSeq::from_tail((Vector(3) << 1.0, 1.0, 1.0).finished());
  const SigmaSeq ci = sigma_inv(c);
  CHECK(ci.coeffs()[0] == 1.0);
  CHECK(ci.coeffs()[1] == doctest::Approx(-1.0));
  CHECK(ci.coeffs()[2] == doctest::Approx(0.0));
  CHECK(ci.coeffs()[3] == doctest::Approx(0.0));
}

TEST_CASE("products agree with plain truncated convolution") {
  Rng rng(43);
  for (int rep = 0; rep < 30; ++rep) {
    const Index k = rng.uniform_int(1, 12);
    const SigmaSeq a = random_sigma(rng, k);
    const SigmaSeq b = random_sigma(rng, k);
    const Vector expected =
        testing::conv_reference(a.coeffs(), b.coeffs(), k + 1);
    CHECK(sigma_mul(a, b).coeffs().isApprox(expected, 1e-13));
  }
}

TEST_CASE("group laws hold under truncation") {
  Rng rng(45);
  for (int rep = 0; rep < 30; ++rep) {
    const Index k = rng.uniform_int(1, 10);
    const SigmaSeq a = random_sigma(rng, k);
    const SigmaSeq b = random_sigma(rng, k);
    const SigmaSeq c = random_sigma(rng, k);

    const SigmaSeq ab_c = sigma_mul(sigma_mul(a, b), c);
    const SigmaSeq a_bc = sigma_mul(a, sigma_mul(b, c));
    CHECK((ab_c.coeffs() - a_bc.coeffs()).norm() <= 1e-10 * ab_c.coeffs().norm());

    CHECK((sigma_mul(a, b).coeffs() - sigma_mul(b, a).coeffs()).norm() <= 1e-12);

    const SigmaSeq ai = sigma_inv(a);
    const Vector e = SigmaSeq::identity(k + 1).coeffs();
    CHECK((sigma_mul(a, ai).coeffs() - e).norm() <= 1e-9 * (1.0 + ai.coeffs().norm()));
  }
}

TEST_CASE("toeplitz lift is a ring homomorphism") {
  Rng rng(47);
  const SigmaSeq a = random_sigma(rng, 5);
  const SigmaSeq b = random_sigma(rng, 5);
  const Matrix Ta = sigma_to_toeplitz(a);
  const Matrix Tb = sigma_to_toeplitz(b);
  CHECK((Ta * Tb).isApprox(sigma_to_toeplitz(sigma_mul(a, b)), 1e-13));

  Matrix expected(3, 3);
  expected << 1.0, 2.0, 3.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0;
  CHECK(sigma_to_toeplitz(SigmaSeq::from_tail((Vector(2) << 2.0, 3.0).finished()))
            .isApprox(expected));
}

TEST_CASE("the two polynomial action routes coincide") {
  // Worked case: (1,1,0) acting on s^2 + s + 2.
  const SigmaSeq s = SigmaSeq::from_tail((Vector(2) << 1.0, 0.0).finished());
  const MonicPoly d = MonicPoly::from_tail((Vector(2) << 1.0, 2.0).finished());
  const MonicPoly via_conv = sigma_times_poly(s, d);
  CHECK(via_conv[0] == 1.0);
  CHECK(via_conv[1] == doctest::Approx(2.0));
  CHECK(via_conv[2] == doctest::Approx(3.0));

  Rng rng(49);
  for (int rep = 0; rep < 30; ++rep) {
    const Index n = rng.uniform_int(1, 10);
    const SigmaSeq sig = random_sigma(rng, n);
    const MonicPoly p = MonicPoly::from_tail(rng.uniform_vector(n, -2.0, 2.0));
    const MonicPoly x = sigma_times_poly(sig, p);
    const MonicPoly y = sigma_apply_last_column(sig, p);
    CHECK(poly_distance(x, y) <= 1e-12 * (1.0 + x.coeffs().norm()));
  }
}

TEST_CASE("inverses undo products exactly enough to transport polynomials") {
  Rng rng(51);
  const Index n = 8;
  const SigmaSeq sig = random_sigma(rng, n);
  const MonicPoly d = MonicPoly::from_tail(rng.uniform_vector(n, -1.0, 1.0));
  const MonicPoly moved = sigma_times_poly(sig, d);
  const MonicPoly back = sigma_times_poly(sigma_inv(sig), moved);
  CHECK(poly_distance(back, d) <= 1e-10 * (1.0 + d.coeffs().norm()));
}
