#include "sofpoly/driver.hpp"
#include "sofpoly/feedback.hpp"
#include "sofpoly/instances.hpp"
#include "sofpoly/krylov.hpp"
#include "sofpoly/sigma.hpp"

#include <benchmark/benchmark.h>

using namespace sofpoly;

namespace {

InstanceSpec spec_for(Index n) {
  InstanceSpec spec;
  spec.n = n;
  spec.seed = 42;
  return spec;
}

void BM_sigma_mul(benchmark::State& state) {
  const Index k = state.range(0);
  Rng rng(7);
  const SigmaSeq a = SigmaSeq::from_tail(rng.uniform_vector(k, -1.0, 1.0));
  const SigmaSeq b = SigmaSeq::from_tail(rng.uniform_vector(k, -1.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(sigma_mul(a, b));
}
BENCHMARK(BM_sigma_mul)->Arg(16)->Arg(64)->Arg(256);

void BM_full_krylov(benchmark::State& state) {
  const PlantedInstance inst = gen_instance(spec_for(state.range(0)));
  const Tolerance tol = Tolerance::standard(inst.sys.n());
  const Vector w0 = inst.sys.B().col(0);
  for (auto _ : state) benchmark::DoNotOptimize(full_krylov(inst.sys.A(), w0, tol));
}
BENCHMARK(BM_full_krylov)->Arg(10)->Arg(20);

void BM_rank_one_update(benchmark::State& state) {
  const PlantedInstance inst = gen_instance(spec_for(state.range(0)));
  const Tolerance tol = Tolerance::standard(inst.sys.n());
  Rng rng(3);
  const Vector mu = rng.unit_vector(inst.sys.m());
  for (auto _ : state)
    benchmark::DoNotOptimize(rank_one_update(inst.sys, mu, inst.target, tol));
}
BENCHMARK(BM_rank_one_update)->Arg(10)->Arg(20);

void BM_algorithm_one(benchmark::State& state) {
  const PlantedInstance inst = gen_instance(spec_for(state.range(0)));
  const Tolerance tol = Tolerance::standard(inst.sys.n());
  AlgorithmOneConfig cfg;
  cfg.epsilon = 1e-300;
  cfg.max_iters = 50;
  cfg.seed = 11;
  for (auto _ : state)
    benchmark::DoNotOptimize(algorithm_one(inst.sys, inst.target, cfg, tol));
}
BENCHMARK(BM_algorithm_one)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
