#pragma once

#include "sofpoly/types.hpp"

#include <cstdint>
#include <random>

namespace sofpoly {

/// Deterministic, portable random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so streams reproduce across compilers and platforms. The
/// standard *distributions* are not portable, which is why the uniform
/// samplers below are spelled out explicitly:
///
///   uniform_real(lo, hi): u = (next_u64() >> 11) * 2^-53 in [0,1),
///                         result = lo + u * (hi - lo)
///   uniform_int(lo, hi):  masked rejection on the low bits of next_u64()
///
/// Substreams (one per experiment repetition, per iteration, per candidate)
/// are derived from the parent seed with splitmix64 so that work items can be
/// evaluated in any order, or concurrently, without changing results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64();

  /// Uniform on [lo, hi). Requires lo < hi and both finite.
  double uniform_real(double lo, double hi);
  /// Uniform on the integers lo..hi inclusive. Requires lo <= hi.
  long uniform_int(long lo, long hi);
  /// +1.0 or -1.0 with equal probability.
  double uniform_sign();

  Vector uniform_vector(Index n, double lo, double hi);
  Matrix uniform_matrix(Index rows, Index cols, double lo, double hi);
  /// Entries are integers drawn uniformly from [-bound, bound], stored as doubles.
  Matrix integer_matrix(Index rows, Index cols, long bound);
  /// Entries uniform on [-1,1], then normalized to unit Euclidean norm.
  Vector unit_vector(Index n);

  /// Child generator number `index`, derived from this generator's seed
  /// (not from its current state), so derivation commutes with consumption.
  Rng substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

/// splitmix64 mixing function (public-domain construction), used for
/// substream seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sofpoly
