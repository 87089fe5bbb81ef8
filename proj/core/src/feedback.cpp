#include "sofpoly/feedback.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace sofpoly {

namespace {

// Solve y^T W = r^T for y with a pivoted QR of W^T, guarding the condition
// estimate the same way matrix_from_krylov does. Equation k reads
// <w_k, y> = r_k; dividing both sides by ||w_k|| equilibrates away the
// ||A||^k column growth without changing y.
Vector solve_row_system(const Matrix& W, const Vector& r, const Tolerance& tol,
                        const char* who) {
  Matrix lhs = W.transpose();
  Vector rhs = r;
  for (Index k = 0; k < lhs.rows(); ++k) {
    const double s = lhs.row(k).norm();
    if (s == 0.0)
      throw ConditioningError(std::string(who) + ": Krylov prefix too ill-conditioned");
    lhs.row(k) /= s;
    rhs[k] /= s;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(lhs);
  qr.setThreshold(tol.rank_tol);
  const Vector diag = qr.matrixR().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  if (dmin == 0.0 || dmax / dmin > 1.0 / tol.rank_tol)
    throw ConditioningError(std::string(who) + ": Krylov prefix too ill-conditioned");
  return qr.solve(rhs);
}

void check_plant_shapes(const Matrix& A, const Matrix& B, const Matrix& C) {
  if (A.rows() != A.cols()) throw ShapeError("plant: A must be square");
  if (B.rows() != A.rows()) throw ShapeError("plant: rows(B) must equal n");
  if (C.cols() != A.rows()) throw ShapeError("plant: cols(C) must equal n");
  if (B.cols() < 1 || C.rows() < 1) throw ShapeError("plant: B and C must be nonempty");
}

}  // namespace

FeedbackSystem::FeedbackSystem(Matrix A, Matrix B, Matrix C, const Tolerance& tol)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
  check_plant_shapes(A_, B_, C_);
  require_finite(A_, "FeedbackSystem: A");
  require_finite(B_, "FeedbackSystem: B");
  require_finite(C_, "FeedbackSystem: C");
  if (numerical_rank(B_, tol) != B_.cols())
    throw DomainError("FeedbackSystem: columns of B are dependent");
  if (numerical_rank(C_, tol) != C_.rows())
    throw DomainError("FeedbackSystem: rows of C are dependent");
  if (numerical_rank(controllability_matrix(A_, B_), tol) != A_.rows())
    throw DomainError("FeedbackSystem: (A, B) is not controllable");
}

FeedbackSystem::FeedbackSystem(Matrix A, Matrix B, Matrix C)
    : FeedbackSystem(std::move(A), std::move(B), std::move(C),
                     Tolerance::standard(A.rows())) {}

Matrix controllability_matrix(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != A.rows())
    throw ShapeError("controllability_matrix: shape mismatch");
  const Index n = A.rows();
  const Index m = B.cols();
  Matrix ctrb(n, n * m);
  ctrb.leftCols(m) = B;
  for (Index k = 1; k < n; ++k)
    ctrb.middleCols(k * m, m) = A * ctrb.middleCols((k - 1) * m, m);
  return ctrb;
}

RankOneResult rank_one_update(const Matrix& A, const Matrix& B, const Matrix& C,
                              const Vector& mu, const MonicPoly& b,
                              const std::optional<MonicPoly>& d_carried,
                              const Tolerance& tol) {
  check_plant_shapes(A, B, C);
  if (mu.size() != B.cols()) throw ShapeError("rank_one_update: mu length must equal m");
  const Index n = A.rows();
  if (b.degree() != n) throw ShapeError("rank_one_update: target degree must equal n");
  require_finite(mu, "rank_one_update: mu");
  if (mu.norm() == 0.0) throw DomainError("rank_one_update: mu must be nonzero");
  if (d_carried && d_carried->degree() != n)
    throw ShapeError("rank_one_update: carried polynomial degree must equal n");

  const KrylovSeq W = full_krylov(A, B * mu, tol);
  const Matrix W_pre = W.prefix();
  const MonicPoly d = d_carried ? *d_carried : annihilating_from_krylov(W, tol);

  // rho^T (C W_pre) D = (b1..bn) - (d1..dn), D the unit upper-triangular
  // Toeplitz matrix built from (d0, ..., d_(n-1)).
  const Matrix M = C * W_pre;
  const Matrix D = sigma_to_toeplitz(SigmaSeq(d.coeffs().head(n)));
  const Vector rhs = b.tail() - d.tail();
  const LeastSquaresSolution ls = least_squares_row(M * D, rhs, tol);

  RankOneResult r{.mu = mu,
                  .rho = ls.x,
                  .sigma = SigmaSeq::from_tail(M.transpose() * ls.x),
                  .K = -mu * ls.x.transpose(),
                  .F = Matrix(),
                  .d_current = d,
                  .d_new = MonicPoly(),
                  .residual = ls.residual_norm,
                  .relative_residual = 0.0};
  r.d_new = sigma_times_poly(r.sigma, d);
  const Vector y = solve_row_system(W_pre, r.sigma.tail(), tol, "rank_one_update");
  r.F = -mu * y.transpose();
  const double bn = b.coeffs().norm();
  r.relative_residual = bn > 0.0 ? r.residual / bn : 0.0;
  return r;
}

RankOneResult rank_one_update(const FeedbackSystem& sys, const Vector& mu,
                              const MonicPoly& b, const Tolerance& tol) {
  return rank_one_update(sys.A(), sys.B(), sys.C(), mu, b, std::nullopt, tol);
}

Matrix state_feedback_from_sigma(const FeedbackSystem& sys, const Vector& mu,
                                 const SigmaSeq& sigma, const Tolerance& tol) {
  if (mu.size() != sys.m()) throw ShapeError("state_feedback_from_sigma: mu length");
  if (sigma.length() != sys.n() + 1)
    throw ShapeError("state_feedback_from_sigma: sequence length must be n+1");
  if (mu.norm() == 0.0) throw DomainError("state_feedback_from_sigma: mu must be nonzero");
  const KrylovSeq W = full_krylov(sys.A(), sys.B() * mu, tol);
  const Vector y =
      solve_row_system(W.prefix(), sigma.tail(), tol, "state_feedback_from_sigma");
  return -mu * y.transpose();
}

ReachabilityVerdict bkc_reachability_check(const Matrix& A, const Matrix& A_hat,
                                           const Matrix& B, const Matrix& C,
                                           const Tolerance& tol) {
  check_plant_shapes(A, B, C);
  if (A_hat.rows() != A.rows() || A_hat.cols() != A.cols())
    throw ShapeError("bkc_reachability_check: A_hat shape mismatch");
  require_finite(A, "bkc_reachability_check: A");
  require_finite(A_hat, "bkc_reachability_check: A_hat");
  require_finite(B, "bkc_reachability_check: B");
  require_finite(C, "bkc_reachability_check: C");

  const Matrix E = A_hat - A;
  const double scale = E.norm();
  ReachabilityVerdict v;
  if (scale == 0.0) {
    v.column_condition = v.kernel_condition = true;
    v.max_violation = 0.0;
    v.K = Matrix::Zero(B.cols(), C.rows());
    return v;
  }

  // Column condition: residual of the columnwise least-squares fit B X = E.
  Eigen::CompleteOrthogonalDecomposition<Matrix> codB(B);
  codB.setThreshold(tol.rank_tol);
  const Matrix X = codB.solve(E);
  const double col_violation = (E - B * X).norm() / scale;

  // Kernel condition: E must annihilate ker(C).
  const Matrix Z = kernel_basis(C, tol);
  const double ker_violation = Z.cols() > 0 ? (E * Z).norm() / scale : 0.0;

  v.column_condition = col_violation <= tol.residual_tol;
  v.kernel_condition = ker_violation <= tol.residual_tol;
  v.max_violation = std::max(col_violation, ker_violation);
  if (v.reachable()) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> codC(C);
    codC.setThreshold(tol.rank_tol);
    v.K = X * codC.pseudoInverse();
  }
  return v;
}

MimoSolveResult mimo_bilinear_solve(const FeedbackSystem& sys, const MonicPoly& b,
                                    const Vector& alpha0, int max_alternations,
                                    const Tolerance& tol) {
  const Index n = sys.n();
  const Index m = sys.m();
  if (b.degree() != n) throw ShapeError("mimo_bilinear_solve: target degree must equal n");
  if (alpha0.size() != m) throw ShapeError("mimo_bilinear_solve: alpha0 length must equal m");
  if (alpha0.norm() == 0.0) throw DomainError("mimo_bilinear_solve: alpha0 must be nonzero");
  if (max_alternations < 1) throw DomainError("mimo_bilinear_solve: need at least one alternation");

  // One full Krylov sequence per input column; the sequence for B alpha is
  // their alpha-combination, so the loop below is all small solves.
  std::vector<Matrix> W(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    W[static_cast<std::size_t>(i)] = full_krylov(sys.A(), sys.B().col(i), tol).columns();

  const MonicPoly d = annihilating_from_krylov(
      KrylovSeq::from_columns(W[0], tol), tol);
  const Matrix D = sigma_to_toeplitz(SigmaSeq(d.coeffs().head(n)));
  const Vector rhs = b.tail() - d.tail();

  // Rows of G: rho^T C W_pre(i) D, so that the alpha half-step reads
  // alpha^T G = rhs^T.
  std::vector<Matrix> CWD(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    CWD[static_cast<std::size_t>(i)] =
        sys.C() * W[static_cast<std::size_t>(i)].leftCols(n) * D;

  MimoSolveResult out{.alpha = alpha0,
                      .rho = Vector::Zero(sys.p()),
                      .sigma = SigmaSeq::identity(n + 1),
                      .d_current = d,
                      .d_new = d,
                      .K = Matrix::Zero(m, sys.p()),
                      .residual_history = {},
                      .residual = rhs.norm(),
                      .relative_residual = 0.0,
                      .converged = false};

  const double bnorm = b.coeffs().norm();
  const double conv_cut = tol.residual_tol * bnorm;
  auto rho_step = [&](const Vector& alpha) {
    Matrix MD = Matrix::Zero(sys.p(), n);
    for (Index i = 0; i < m; ++i) MD += alpha[i] * CWD[static_cast<std::size_t>(i)];
    return least_squares_row(MD, rhs, tol);
  };

  bool ended_on_rho = false;
  for (int t = 0; t < max_alternations; ++t) {
    const LeastSquaresSolution ls_rho = rho_step(out.alpha);
    out.rho = ls_rho.x;
    out.residual_history.push_back(ls_rho.residual_norm);
    ended_on_rho = true;
    if (ls_rho.residual_norm <= conv_cut) break;
    // Stagnation: improvement under 1e-12 across the last 5 alternations.
    const std::size_t h = out.residual_history.size();
    if (h >= 11 && out.residual_history[h - 11] - out.residual_history[h - 1] < 1e-12)
      break;

    Matrix G(m, n);
    for (Index i = 0; i < m; ++i)
      G.row(i) = out.rho.transpose() * CWD[static_cast<std::size_t>(i)];
    const LeastSquaresSolution ls_alpha = least_squares_row(G, rhs, tol);
    out.alpha = ls_alpha.x;
    out.residual_history.push_back(ls_alpha.residual_norm);
    ended_on_rho = false;
  }
  if (!ended_on_rho) {
    const LeastSquaresSolution ls_rho = rho_step(out.alpha);
    out.rho = ls_rho.x;
    out.residual_history.push_back(ls_rho.residual_norm);
  }

  // Assemble the consistent (alpha, rho) pair.
  Matrix W_alpha_pre = Matrix::Zero(n, n);
  for (Index i = 0; i < m; ++i)
    W_alpha_pre += out.alpha[i] * W[static_cast<std::size_t>(i)].leftCols(n);
  out.sigma = SigmaSeq::from_tail((sys.C() * W_alpha_pre).transpose() * out.rho);
  out.d_new = sigma_times_poly(out.sigma, d);
  out.K = -out.alpha * out.rho.transpose();
  out.residual = poly_distance(out.d_new, b);
  out.relative_residual = bnorm > 0.0 ? out.residual / bnorm : 0.0;
  out.converged = out.residual <= conv_cut;
  return out;
}

MonicPoly extract_annihilating(const Matrix& A, Rng& rng, const Tolerance& tol,
                               int max_tries) {
  if (A.rows() != A.cols()) throw ShapeError("extract_annihilating: A must be square");
  for (int t = 0; t < max_tries; ++t) {
    try {
      return annihilating_from_krylov(full_krylov(A, rng.unit_vector(A.rows()), tol), tol);
    } catch (const DependentPrefixError&) {
      // resample and retry; a derogatory A eventually exhausts the budget
    }
  }
  throw DependentPrefixError(
      "extract_annihilating: no sampled vector generated a full sequence");
}

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Extended-precision twin of the Krylov extraction, used only to build the
// verification reference: same sequence, same column-normalized
// least-squares formulation, arithmetic carried in long double. A referee
// must out-resolve what it judges; in double the extraction error on badly
// conditioned closed loops can sit orders of magnitude above the acceptance
// threshold, flagging perfectly good gains.
Vector annihilating_tail_extended(const Matrix& A, const Vector& start,
                                  const Tolerance& tol) {
  const Index n = A.rows();
  const LongMatrix Al = A.cast<long double>();
  LongMatrix W(n, n + 1);
  W.col(0) = start.cast<long double>();
  for (Index k = 1; k <= n; ++k) W.col(k) = Al * W.col(k - 1);

  LongMatrix pre = W.leftCols(n);
  LongVector scale(n);
  for (Index j = 0; j < n; ++j) {
    scale[j] = pre.col(j).norm();
    if (!(scale[j] > 0.0L))
      throw DependentPrefixError("verify_feedback: Krylov sequence hit zero");
    pre.col(j) /= scale[j];
  }
  Eigen::ColPivHouseholderQR<LongMatrix> qr(pre);
  qr.setThreshold(static_cast<long double>(tol.rank_tol));
  if (qr.rank() < n)
    throw DependentPrefixError("verify_feedback: dependent Krylov prefix");
  const LongVector x = qr.solve(LongVector(-W.col(n)));
  Vector tail(n);
  for (Index i = 0; i < n; ++i)
    tail[i] = static_cast<double>(x[n - 1 - i] / scale[n - 1 - i]);
  return tail;
}

}  // namespace

double verify_feedback(const Matrix& A, const Matrix& B, const Matrix& C,
                       const Matrix& K, const MonicPoly& d_claimed, Rng& rng,
                       const Tolerance& tol) {
  if (K.rows() != B.cols() || K.cols() != C.rows())
    throw ShapeError("verify_feedback: K must be m x p");
  const Matrix closed = A + B * K * C;

  // The reference is the coefficientwise median of a few independent
  // extended-precision extractions: the median tames the heavy tail a single
  // initial-vector draw leaves in the extraction error, and the claim plays
  // no part in forming it.
  constexpr int kExtractions = 3;
  const Index n = closed.rows();
  std::array<Vector, kExtractions> tails;
  for (auto& t : tails) {
    for (int tries = 0;; ++tries) {
      try {
        t = annihilating_tail_extended(closed, rng.unit_vector(n), tol);
        break;
      } catch (const DependentPrefixError&) {
        if (tries >= 7) throw;
      }
    }
  }
  Vector median_tail(n);
  std::array<double, kExtractions> vals;
  for (Index c = 0; c < n; ++c) {
    for (std::size_t s = 0; s < kExtractions; ++s) vals[s] = tails[s][c];
    std::nth_element(vals.begin(), vals.begin() + kExtractions / 2, vals.end());
    median_tail[c] = vals[kExtractions / 2];
  }
  const MonicPoly d_re = MonicPoly::from_tail(median_tail);
  return poly_distance(d_re, d_claimed) / d_claimed.coeffs().norm();
}

}  // namespace sofpoly
