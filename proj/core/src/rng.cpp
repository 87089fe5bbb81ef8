#include "sofpoly/rng.hpp"

#include <cmath>

namespace sofpoly {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

std::uint64_t Rng::next_u64() { return eng_(); }

double Rng::uniform_real(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("uniform_real: bad interval");
  }
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

long Rng::uniform_int(long lo, long hi) {
  if (lo > hi) throw DomainError("uniform_int: bad interval");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<long>(next_u64());  // full 64-bit span
  std::uint64_t mask = range - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  std::uint64_t draw;
  do {
    draw = next_u64() & mask;
  } while (draw >= range);
  return lo + static_cast<long>(draw);
}

double Rng::uniform_sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

Vector Rng::uniform_vector(Index n, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = uniform_real(lo, hi);
  return v;
}

Matrix Rng::uniform_matrix(Index rows, Index cols, double lo, double hi) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = uniform_real(lo, hi);
  return M;
}

Matrix Rng::integer_matrix(Index rows, Index cols, long bound) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      M(i, j) = static_cast<double>(uniform_int(-bound, bound));
  return M;
}

Vector Rng::unit_vector(Index n) {
  for (;;) {
    Vector v = uniform_vector(n, -1.0, 1.0);
    const double nrm = v.norm();
    if (nrm > 1e-8) return v / nrm;
  }
}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(seed_ ^ (0x9e3779b97f4a7c15ull * (index + 1))));
}

}  // namespace sofpoly
