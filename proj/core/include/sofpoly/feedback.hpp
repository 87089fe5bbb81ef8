#pragma once

#include "sofpoly/krylov.hpp"
#include "sofpoly/numerics.hpp"
#include "sofpoly/poly.hpp"
#include "sofpoly/rng.hpp"
#include "sofpoly/sigma.hpp"
#include "sofpoly/types.hpp"

#include <optional>
#include <vector>

namespace sofpoly {

/// Plant (A, B, C) for static output feedback u = K y, i.e. the closed loop
/// A + B K C. Construction checks that B has independent columns, C has
/// independent rows, and (A, B) is controllable, all at tol.rank_tol.
class FeedbackSystem {
 public:
  FeedbackSystem(Matrix A, Matrix B, Matrix C, const Tolerance& tol);
  /// Same, with Tolerance::standard(n).
  FeedbackSystem(Matrix A, Matrix B, Matrix C);

  Index n() const { return A_.rows(); }
  Index m() const { return B_.cols(); }
  Index p() const { return C_.rows(); }
  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& C() const { return C_; }

 private:
  Matrix A_, B_, C_;
};

/// (B | AB | ... | A^(n-1) B), the n x (n*m) controllability matrix.
Matrix controllability_matrix(const Matrix& A, const Matrix& B);

/// Outcome of one rank-one output-feedback update seeded by the input
/// direction mu: K = -mu rho^T closes the loop so that the annihilating
/// polynomial of A + B K C becomes d_new = sigma * d_current, the admissible
/// polynomial closest to the target b.
struct RankOneResult {
  Vector mu;            ///< input direction, w0 = B mu
  Vector rho;           ///< row least-squares solution (length p)
  SigmaSeq sigma;       ///< (1, rho^T C (w0|...|w_(n-1))), length n+1
  Matrix K;             ///< -mu rho^T, rank at most one
  Matrix F;             ///< equivalent state feedback, B F = B K C
  MonicPoly d_current;  ///< annihilating polynomial the update started from
  MonicPoly d_new;      ///< sigma * d_current = annihilating poly of A + BKC
  double residual;      ///< least-squares residual = || b - d_new ||
  double relative_residual;  ///< residual / || b ||
};

/// One rank-one update of the closed loop toward target polynomial b
/// (degree n, monic). The current annihilating polynomial is extracted from
/// the Krylov sequence of A with initial vector B mu.
RankOneResult rank_one_update(const FeedbackSystem& sys, const Vector& mu,
                              const MonicPoly& b, const Tolerance& tol);

/// Same update on raw matrices with an optional carried annihilating
/// polynomial (iterative drivers update d by sequence products instead of
/// re-extracting it each step). No system-invariant revalidation.
RankOneResult rank_one_update(const Matrix& A, const Matrix& B, const Matrix& C,
                              const Vector& mu, const MonicPoly& b,
                              const std::optional<MonicPoly>& d_carried,
                              const Tolerance& tol);

/// State feedback F = -mu (s1, ..., sn) (w0 | ... | w_(n-1))^-1 realizing
/// the sequence transform as A + B F. ConditioningError when the Krylov
/// prefix for B mu is too ill-conditioned to invert.
Matrix state_feedback_from_sigma(const FeedbackSystem& sys, const Vector& mu,
                                 const SigmaSeq& sigma, const Tolerance& tol);

/// Can A_hat - A be factored as B K C? Checked through the two defining
/// conditions: every column of the difference lies in the column space of B,
/// and the difference annihilates the kernel of C. Violations are measured
/// relative to || A_hat - A ||_F and compared against tol.residual_tol.
struct ReachabilityVerdict {
  bool column_condition = false;
  bool kernel_condition = false;
  double max_violation = 0.0;  ///< larger of the two relative violations
  Matrix K;                    ///< a witness gain when reachable, else 0 x 0
  bool reachable() const { return column_condition && kernel_condition; }
};

ReachabilityVerdict bkc_reachability_check(const Matrix& A, const Matrix& A_hat,
                                           const Matrix& B, const Matrix& C,
                                           const Tolerance& tol);

/// Alternating least squares for the multi-input bilinear system in
/// (rho, alpha): with alpha fixed the problem is the rank-one row solve for
/// rho; with rho fixed it is linear in alpha. Residuals never increase from
/// one half-step to the next, but the limit need not be zero.
struct MimoSolveResult {
  Vector alpha;  ///< input combination, w0 = B alpha
  Vector rho;
  SigmaSeq sigma;
  MonicPoly d_current;
  MonicPoly d_new;
  Matrix K;  ///< -alpha rho^T
  std::vector<double> residual_history;  ///< one entry per half-step
  double residual;
  double relative_residual;
  bool converged = false;  ///< relative residual at or below tol.residual_tol
};

MimoSolveResult mimo_bilinear_solve(const FeedbackSystem& sys, const MonicPoly& b,
                                    const Vector& alpha0, int max_alternations,
                                    const Tolerance& tol);

/// Annihilating polynomial of A through a freshly seeded Krylov extraction;
/// resamples the initial vector on a dependent prefix, up to max_tries.
MonicPoly extract_annihilating(const Matrix& A, Rng& rng, const Tolerance& tol,
                               int max_tries = 16);

/// Independent check of a claimed closed-loop polynomial: rebuild A + B K C,
/// re-run the Krylov extraction from fresh random initial vectors, and
/// return the relative coefficient mismatch against d_claimed. The reference
/// is the coefficientwise median of a few extractions carried in extended
/// precision, so its own error stays well below the acceptance threshold
/// even on badly conditioned closed loops; the claim is never consulted
/// while forming it.
double verify_feedback(const Matrix& A, const Matrix& B, const Matrix& C,
                       const Matrix& K, const MonicPoly& d_claimed, Rng& rng,
                       const Tolerance& tol);

/// Relative mismatch above which a verification is considered failed.
inline constexpr double kVerifyRelTol = 1e-6;

}  // namespace sofpoly
