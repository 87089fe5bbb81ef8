#include "sofpoly/types.hpp"

#include <cmath>
#include <limits>

namespace sofpoly {

Tolerance Tolerance::standard(Index n) {
  const double eps = std::numeric_limits<double>::epsilon();
  return Tolerance{static_cast<double>(n < 1 ? 1 : n) * eps, 1e-9};
}

bool all_finite(const Matrix& M) { return M.allFinite(); }

void require_finite(const Matrix& M, const char* what) {
  if (!M.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite entry");
  }
}

Reachability classify_relative_residual(double relative_residual) {
  if (relative_residual <= 1e-8) return Reachability::reachable;
  if (relative_residual >= 1e-3) return Reachability::unreachable;
  return Reachability::indeterminate;
}

const char* to_string(Reachability r) {
  switch (r) {
    case Reachability::reachable: return "reachable";
    case Reachability::unreachable: return "unreachable";
    default: return "indeterminate";
  }
}

}  // namespace sofpoly
