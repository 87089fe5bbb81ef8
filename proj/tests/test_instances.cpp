#include "sofpoly/instances.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "sofpoly/numerics.hpp"

#include <cmath>

using namespace sofpoly;

namespace {

InstanceSpec small_spec(std::uint64_t seed) {
  InstanceSpec spec;
  spec.n = 8;
  spec.m = 2;
  spec.p = 2;
  spec.seed = seed;
  return spec;
}

bool is_integer_matrix(const Matrix& M, double bound) {
  for (Index r = 0; r < M.rows(); ++r)
    for (Index c = 0; c < M.cols(); ++c)
      if (M(r, c) != std::floor(M(r, c)) || std::abs(M(r, c)) > bound) return false;
  return true;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
  const PlantedInstance a = gen_instance(small_spec(301));
  const PlantedInstance b = gen_instance(small_spec(301));
  const PlantedInstance c = gen_instance(small_spec(302));
  CHECK(a.sys.A().isApprox(b.sys.A(), 0.0));
  CHECK(a.sys.B().isApprox(b.sys.B(), 0.0));
  CHECK(a.sys.C().isApprox(b.sys.C(), 0.0));
  CHECK(a.planted_K.isApprox(b.planted_K, 0.0));
  CHECK(a.target.coeffs().isApprox(b.target.coeffs(), 0.0));
  CHECK_FALSE(a.sys.A().isApprox(c.sys.A(), 0.0));
}

TEST_CASE("planted instances follow the recipe") {
  const InstanceSpec spec = small_spec(303);
  const PlantedInstance inst = gen_instance(spec);

  // Companion A: unit subdiagonal, integer last column, zero elsewhere.
  const Matrix& A = inst.sys.A();
  for (Index r = 0; r < spec.n; ++r)
    for (Index c = 0; c + 1 < spec.n; ++c)
      CHECK(A(r, c) == (r == c + 1 ? 1.0 : 0.0));
  CHECK(is_integer_matrix(A.col(spec.n - 1), spec.coeff_bound));
  // Constant coefficient of the characteristic polynomial is +-1.
  CHECK(std::abs(A(0, spec.n - 1)) == 1.0);

  CHECK(is_integer_matrix(inst.sys.B(), spec.bc_bound));
  CHECK(is_integer_matrix(inst.sys.C(), spec.bc_bound));
  CHECK(inst.planted_K.cwiseAbs().maxCoeff() <= spec.k_bound);

  // The target is the closed-loop polynomial of the planted gain.
  const MonicPoly ref = testing::char_poly_reference(
      A + inst.sys.B() * inst.planted_K * inst.sys.C());
  CHECK(poly_distance(inst.target, ref) <= 1e-8 * ref.coeffs().norm());
}

TEST_CASE("perturbed targets differ from the open loop in the middle only") {
  const InstanceSpec spec = small_spec(305);
  const double eps = 0.01;
  const TargetInstance inst = gen_unreachable_target(spec, eps);
  const MonicPoly d_open = testing::char_poly_reference(inst.sys.A());

  const Vector diff = inst.target.coeffs() - d_open.coeffs();
  CHECK(diff[0] == 0.0);                     // leading coefficient untouched
  CHECK(std::abs(diff[spec.n]) <= 1e-8);     // constant coefficient untouched
  CHECK(diff.norm() <= eps * std::sqrt(static_cast<double>(spec.n - 1)) + 1e-8);
  CHECK(diff.norm() > 0.0);
}

TEST_CASE("default spec generates the benchmark shape") {
  InstanceSpec spec;
  spec.seed = 307;
  const PlantedInstance inst = gen_instance(spec);
  CHECK(inst.sys.n() == 20);
  CHECK(inst.sys.m() == 3);
  CHECK(inst.sys.p() == 3);
  CHECK(inst.target.degree() == 20);
}

TEST_CASE("instances carry their exact open-loop polynomial") {
  const InstanceSpec spec = small_spec(309);
  const PlantedInstance inst = gen_instance(spec);

  // A is the companion matrix of d_open, coefficient for coefficient.
  CHECK((inst.sys.A() - companion_matrix(inst.d_open)).norm() == 0.0);
  const MonicPoly ref = testing::char_poly_reference(inst.sys.A());
  CHECK(poly_distance(inst.d_open, ref) <= 1e-8 * ref.coeffs().norm());

  const TargetInstance tgt = gen_unreachable_target(spec, 0.01);
  CHECK((tgt.sys.A() - companion_matrix(tgt.d_open)).norm() == 0.0);
}
