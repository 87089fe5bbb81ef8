#include "sofpoly/instances.hpp"

#include "sofpoly/numerics.hpp"

#include <optional>
#include <utility>

namespace sofpoly {

namespace {

void check_spec(const InstanceSpec& spec) {
  if (spec.n < 1 || spec.m < 1 || spec.p < 1 || spec.p > spec.n)
    throw DomainError("InstanceSpec: need n >= 1, m >= 1, 1 <= p <= n");
  if (spec.coeff_bound < 1 || spec.bc_bound < 1 || !(spec.k_bound > 0.0))
    throw DomainError("InstanceSpec: bounds must be positive");
  if (spec.max_attempts < 1) throw DomainError("InstanceSpec: max_attempts must be positive");
}

MonicPoly random_char_poly(Rng& rng, Index n, int coeff_bound) {
  Vector tail(n);
  for (Index i = 0; i + 1 < n; ++i)
    tail[i] = static_cast<double>(rng.uniform_int(-coeff_bound, coeff_bound));
  tail[n - 1] = rng.uniform_sign();  // nonzero constant term keeps A away from 0
  return MonicPoly::from_tail(tail);
}

struct Plant {
  FeedbackSystem sys;
  MonicPoly d;  ///< characteristic polynomial of the companion-form A, exact
};

std::optional<Plant> try_plant(Rng& rng, const InstanceSpec& spec,
                               const Tolerance& tol) {
  MonicPoly d = random_char_poly(rng, spec.n, spec.coeff_bound);
  Matrix A = companion_matrix(d);
  Matrix B = rng.integer_matrix(spec.n, spec.m, spec.bc_bound);
  Matrix C = rng.integer_matrix(spec.p, spec.n, spec.bc_bound);
  try {
    return Plant{FeedbackSystem(std::move(A), std::move(B), std::move(C), tol),
                 std::move(d)};
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

PlantedInstance gen_instance(const InstanceSpec& spec) {
  check_spec(spec);
  const Tolerance tol = Tolerance::standard(spec.n);
  Rng rng(spec.seed);
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Rng arng = rng.substream(static_cast<std::uint64_t>(attempt));
    std::optional<Plant> plant = try_plant(arng, spec, tol);
    if (!plant) continue;
    const FeedbackSystem& sys = plant->sys;
    const Matrix K = arng.uniform_matrix(spec.m, spec.p, -spec.k_bound, spec.k_bound);
    try {
      MonicPoly b = extract_annihilating(sys.A() + sys.B() * K * sys.C(), arng, tol);
      return PlantedInstance{std::move(plant->sys), std::move(plant->d), K,
                             std::move(b)};
    } catch (const DependentPrefixError&) {
      continue;
    }
  }
  throw GenerationError("gen_instance: retry budget exhausted");
}

TargetInstance gen_unreachable_target(const InstanceSpec& spec, double eps_bound) {
  check_spec(spec);
  if (!(eps_bound > 0.0)) throw DomainError("gen_unreachable_target: eps_bound must be positive");
  const Tolerance tol = Tolerance::standard(spec.n);
  Rng rng(spec.seed);
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Rng arng = rng.substream(static_cast<std::uint64_t>(attempt));
    std::optional<Plant> plant = try_plant(arng, spec, tol);
    if (!plant) continue;
    // The companion characteristic polynomial is exact here, so b - d is
    // exactly the sampled perturbation.
    Vector tail = plant->d.tail();
    for (Index i = 0; i + 1 < spec.n; ++i)
      tail[i] += arng.uniform_real(-eps_bound, eps_bound);
    return TargetInstance{std::move(plant->sys), std::move(plant->d),
                          MonicPoly::from_tail(tail)};
  }
  throw GenerationError("gen_unreachable_target: retry budget exhausted");
}

}  // namespace sofpoly
