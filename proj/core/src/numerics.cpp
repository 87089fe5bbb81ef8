#include "sofpoly/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace sofpoly {

namespace {

using Cplx = std::complex<double>;

bool lex_less(const Cplx& a, const Cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Multiply the accumulated real coefficient vector (descending powers,
// leading 1) by a monic real factor given in the same layout.
Vector conv_monic(const Vector& acc, const Vector& factor) {
  Vector out = Vector::Zero(acc.size() + factor.size() - 1);
  for (Index i = 0; i < acc.size(); ++i)
    for (Index j = 0; j < factor.size(); ++j) out[i + j] += acc[i] * factor[j];
  out[0] = 1.0;  // product of monic factors; clamp away rounding crumbs
  return out;
}

}  // namespace

LeastSquaresSolution least_squares_row(const Matrix& A, const Vector& b,
                                       const Tolerance& tol) {
  if (b.size() != A.cols()) throw ShapeError("least_squares_row: rhs length must equal cols(A)");
  require_finite(A, "least_squares_row: A");
  require_finite(b, "least_squares_row: b");

  // x^T A = b^T is A^T x = b in column form; a complete orthogonal
  // decomposition gives the minimum-norm minimizer on rank deficiency.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A.transpose());
  cod.setThreshold(tol.rank_tol);
  LeastSquaresSolution s;
  s.x = cod.solve(b);
  s.projected_rhs = A.transpose() * s.x;
  s.residual_norm = (b - s.projected_rhs).norm();
  const double bn = b.norm();
  s.relative_residual = bn > 0.0 ? s.residual_norm / bn : 0.0;
  return s;
}

Index numerical_rank(const Matrix& A, const Tolerance& tol) {
  require_finite(A, "numerical_rank: A");
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  const double cut = tol.rank_tol * sv[0];
  Index r = 0;
  while (r < sv.size() && sv[r] > cut) ++r;
  return r;
}

Matrix kernel_basis(const Matrix& A, const Tolerance& tol) {
  require_finite(A, "kernel_basis: A");
  if (A.cols() == 0) return Matrix(0, 0);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Index r = 0;
  if (sv.size() > 0 && sv[0] > 0.0) {
    const double cut = tol.rank_tol * sv[0];
    while (r < sv.size() && sv[r] > cut) ++r;
  }
  return svd.matrixV().rightCols(A.cols() - r);
}

Matrix companion_matrix(const MonicPoly& d) {
  const Index n = d.degree();
  if (n < 1) throw DomainError("companion_matrix: degree must be at least 1");
  Matrix A = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) A(i + 1, i) = 1.0;
  for (Index i = 0; i < n; ++i) A(i, n - 1) = -d[n - i];
  return A;
}

ComplexVector poly_roots(const MonicPoly& d) {
  const Index n = d.degree();
  if (n < 1) throw DomainError("poly_roots: degree must be at least 1");
  Eigen::EigenSolver<Matrix> es(companion_matrix(d));
  if (es.info() != Eigen::Success) throw ConditioningError("poly_roots: eigensolver failed");

  std::vector<Cplx> ev(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(), lex_less);

  // The real Schur form already emits exact conjugate pairs; re-pair anyway
  // so the contract survives any future change of eigensolver.
  std::vector<bool> used(ev.size(), false);
  std::vector<Cplx> out;
  out.reserve(ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Cplx v = ev[i];
    if (v.imag() == 0.0) {
      out.push_back(v);
      continue;
    }
    std::size_t best = ev.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(std::conj(v) - ev[j]);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best == ev.size() || best_dist > 1e-6 * (1.0 + std::abs(v))) {
      out.push_back(v);  // no plausible partner; leave untouched
      continue;
    }
    used[best] = true;
    const Cplx w = ev[best];
    const double re = 0.5 * (v.real() + w.real());
    const double im = 0.5 * (std::abs(v.imag()) + std::abs(w.imag()));
    out.emplace_back(re, -im);
    out.emplace_back(re, im);
  }
  std::sort(out.begin(), out.end(), lex_less);

  ComplexVector result(n);
  for (Index i = 0; i < n; ++i) result[i] = out[static_cast<std::size_t>(i)];
  return result;
}

MonicPoly poly_from_roots(const ComplexVector& roots, double tol) {
  std::vector<Cplx> rs(static_cast<std::size_t>(roots.size()));
  for (Index i = 0; i < roots.size(); ++i) {
    const Cplx r = roots[i];
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
      throw DomainError("poly_from_roots: non-finite root");
    rs[static_cast<std::size_t>(i)] = r;
  }
  std::sort(rs.begin(), rs.end(), lex_less);

  Vector acc = Vector::Ones(1);
  std::vector<bool> used(rs.size(), false);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Cplx r = rs[i];
    if (std::abs(r.imag()) <= tol * (1.0 + std::abs(r))) {
      Vector lin(2);
      lin << 1.0, -r.real();
      acc = conv_monic(acc, lin);
      continue;
    }
    std::size_t best = rs.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rs.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(std::conj(r) - rs[j]);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best == rs.size() || best_dist > tol * (1.0 + std::abs(r)))
      throw DomainError("poly_from_roots: root multiset not closed under conjugation");
    used[best] = true;
    const Cplx w = rs[best];
    const double a = 0.5 * (r.real() + w.real());
    const double b = 0.5 * (std::abs(r.imag()) + std::abs(w.imag()));
    Vector quad(3);
    quad << 1.0, -2.0 * a, a * a + b * b;  // (s - (a+ib))(s - (a-ib))
    acc = conv_monic(acc, quad);
  }
  return MonicPoly(std::move(acc));
}

}  // namespace sofpoly
