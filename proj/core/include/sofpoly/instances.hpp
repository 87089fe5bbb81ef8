#pragma once

#include "sofpoly/feedback.hpp"
#include "sofpoly/poly.hpp"
#include "sofpoly/rng.hpp"
#include "sofpoly/types.hpp"

#include <cstdint>

namespace sofpoly {

/// Recipe for random benchmark instances: a companion-form A from a random
/// integer characteristic polynomial (coefficients in [-coeff_bound,
/// coeff_bound], constant term forced to +/-1), integer B and C, and a small
/// planted gain. Generation is deterministic in the seed.
struct InstanceSpec {
  Index n = 20;
  Index m = 3;
  Index p = 3;
  int coeff_bound = 2;
  int bc_bound = 10;
  double k_bound = 1e-3;
  std::uint64_t seed = 0;
  int max_attempts = 64;
};

struct PlantedInstance {
  FeedbackSystem sys;
  MonicPoly d_open;  ///< annihilating polynomial of A, exact by construction
  Matrix planted_K;  ///< m x p, entries uniform on [-k_bound, k_bound]
  MonicPoly target;  ///< annihilating polynomial of A + B planted_K C
};

/// Draw an instance satisfying the FeedbackSystem invariants, retrying up to
/// spec.max_attempts times before throwing GenerationError.
PlantedInstance gen_instance(const InstanceSpec& spec);

struct TargetInstance {
  FeedbackSystem sys;
  MonicPoly d_open;  ///< annihilating polynomial of A, exact by construction
  MonicPoly target;
};

/// Instance whose target b = d + eps perturbs the open-loop polynomial with
/// coefficients uniform on [-eps_bound, eps_bound], leaving the leading and
/// constant coefficients untouched. Such a target is unreachable by output
/// feedback with probability one when m * p < n.
TargetInstance gen_unreachable_target(const InstanceSpec& spec,
                                      double eps_bound = 0.01);

}  // namespace sofpoly
