#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sofpoly {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Dimensions of the operands do not line up.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A value violates a documented precondition (non-finite entry, wrong range,
/// leading coefficient not one, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A factorization is too ill-conditioned for its result to be trusted.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The first n iterates of a Krylov sequence are numerically dependent.
/// Callers are expected to resample the initial vector.
struct DependentPrefixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Random instance generation exhausted its retry budget.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An independently recomputed result disagrees with a claimed one.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file; the message carries file and line information.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical thresholds shared by rank decisions and residual tests.
/// rank_tol is relative to the largest singular value (or pivot) of the
/// matrix at hand; residual_tol is used for "is this residual zero" checks.
struct Tolerance {
  double rank_tol;
  double residual_tol;

  /// Default thresholds for problems of dimension n:
  /// rank_tol = n * machine epsilon, residual_tol = 1e-9.
  static Tolerance standard(Index n);
};

bool all_finite(const Matrix& M);
void require_finite(const Matrix& M, const char* what);

/// Verdict bands for a relative residual after a feedback solve:
/// reachable below 1e-8, unreachable above 1e-3, indeterminate between.
enum class Reachability { reachable, indeterminate, unreachable };

Reachability classify_relative_residual(double relative_residual);
const char* to_string(Reachability r);

}  // namespace sofpoly
