#include "sofpoly/driver.hpp"

#include "sofpoly/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace sofpoly {

namespace {

// Substream layout shared by both drivers: stream 0 seeds the initial
// extraction, stream i >= 1 seeds iteration i, and the stream one past the
// iteration budget seeds the closing verification.
constexpr std::uint64_t kSecondBatchOffset = 1000000;

struct Candidate {
  RankOneResult result;
  int index;
  double distance;
};

// Evaluate one rank-one candidate per direction; directions that fail the
// Krylov prefix rank check are skipped. Returns the candidate minimizing
// || b - d_new ||, scanning in index order so ties break to the lowest index.
std::optional<Candidate> best_candidate(const Matrix& A, const Matrix& B,
                                        const Matrix& C,
                                        const std::vector<Vector>& mus,
                                        int index_base, const MonicPoly& b,
                                        const MonicPoly& d, const Tolerance& tol) {
  std::optional<Candidate> best;
  for (std::size_t j = 0; j < mus.size(); ++j) {
    try {
      RankOneResult r = rank_one_update(A, B, C, mus[j], b, d, tol);
      const double dist = poly_distance(b, r.d_new);
      if (!best || dist < best->distance) {
        best = Candidate{std::move(r), index_base + static_cast<int>(j), dist};
      }
    } catch (const DependentPrefixError&) {
    } catch (const ConditioningError&) {
    }
  }
  return best;
}

std::vector<Vector> random_directions(Rng& iter_rng, std::uint64_t offset,
                                      int count, Index m) {
  std::vector<Vector> mus;
  mus.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    Rng cand_rng = iter_rng.substream(offset + static_cast<std::uint64_t>(j));
    mus.push_back(cand_rng.unit_vector(m));
  }
  return mus;
}

double rightmost_real(const ComplexVector& roots) {
  double r = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < roots.size(); ++i) r = std::max(r, roots[i].real());
  return r;
}

}  // namespace

const char* to_string(CandidateMode mode) {
  return mode == CandidateMode::columns ? "columns" : "random";
}

namespace {

AlgorithmOneOutcome algorithm_one_impl(const FeedbackSystem& sys,
                                       const MonicPoly& b, const MonicPoly* d0,
                                       const AlgorithmOneConfig& cfg,
                                       const Tolerance& tol) {
  const Index n = sys.n();
  const Index m = sys.m();
  if (b.degree() != n) throw ShapeError("algorithm_one: target degree must equal n");
  if (d0 && d0->degree() != n)
    throw ShapeError("algorithm_one: initial polynomial degree must equal n");
  if (!(cfg.epsilon > 0.0)) throw DomainError("algorithm_one: epsilon must be positive");
  if (cfg.max_iters < 0) throw DomainError("algorithm_one: negative iteration budget");

  Rng master(cfg.seed);
  Rng init_rng = master.substream(0);

  const Matrix& A0 = sys.A();
  Matrix K = Matrix::Zero(m, sys.p());
  Matrix A_cur = A0;
  MonicPoly d = d0 ? *d0 : extract_annihilating(A0, init_rng, tol);
  double dist = poly_distance(b, d);

  const int batch = cfg.combinations_per_iter > 0 ? cfg.combinations_per_iter
                                                  : static_cast<int>(m);
  // Improvements below the rounding noise of the distance computation are
  // not progress; applying them would only accumulate junk into K and erode
  // the carried polynomial's agreement with the true closed-loop one.
  const double gain_floor =
      16.0 * std::numeric_limits<double>::epsilon() * b.coeffs().norm();

  AlgorithmOneOutcome out;
  out.history.reserve(static_cast<std::size_t>(cfg.max_iters));
  std::vector<int> pending_snapshots = cfg.snapshot_iters;
  std::sort(pending_snapshots.begin(), pending_snapshots.end());

  int stagnant_streak = 0;
  int iter = 0;
  while (iter < cfg.max_iters && dist >= cfg.epsilon) {
    ++iter;
    Rng iter_rng = master.substream(static_cast<std::uint64_t>(iter));

    std::vector<Vector> mus;
    if (cfg.mode == CandidateMode::columns) {
      for (Index j = 0; j < m; ++j) mus.push_back(Vector::Unit(m, j));
    } else {
      mus = random_directions(iter_rng, 0, batch, m);
    }
    std::optional<Candidate> best =
        best_candidate(A_cur, sys.B(), sys.C(), mus, 0, b, d, tol);

    // No candidate made measurable progress from these directions: retry the
    // iteration once with a fresh random batch, and only then count it as
    // stagnant. Nothing is applied on a stagnant iteration.
    const auto improves = [&](const std::optional<Candidate>& c) {
      return c && c->distance < dist - gain_floor;
    };
    if (!improves(best)) {
      const std::vector<Vector> retry =
          random_directions(iter_rng, kSecondBatchOffset, batch, m);
      std::optional<Candidate> retry_best = best_candidate(
          A_cur, sys.B(), sys.C(), retry, static_cast<int>(mus.size()), b, d, tol);
      if (retry_best && (!best || retry_best->distance < best->distance))
        best = std::move(retry_best);
    }

    if (!improves(best)) {
      ++stagnant_streak;
      out.history.push_back({iter, dist, -1});
    } else {
      stagnant_streak = 0;
      K += best->result.K;
      A_cur = A0 + sys.B() * K * sys.C();
      d = best->result.d_new;
      dist = best->distance;
      out.history.push_back({iter, dist, best->index});
    }

    while (!pending_snapshots.empty() && pending_snapshots.front() == iter) {
      out.snapshots.push_back({iter, K, d});
      pending_snapshots.erase(pending_snapshots.begin());
    }
    if (stagnant_streak >= cfg.max_stagnant_iters) break;
  }

  // Early exits still owe the caller the requested snapshot points.
  for (int s : pending_snapshots) out.snapshots.push_back({s, K, d});

  out.success = dist < cfg.epsilon;
  out.K_final = K;
  out.d_final = d;
  out.iterations_used = iter;
  out.final_distance = dist;

  Rng verify_rng = master.substream(static_cast<std::uint64_t>(cfg.max_iters) + 1);
  out.verification_mismatch =
      verify_feedback(A0, sys.B(), sys.C(), K, d, verify_rng, tol);
  if (out.verification_mismatch > kVerifyRelTol)
    throw VerificationError("algorithm_one: closed-loop polynomial failed re-verification");
  return out;
}

}  // namespace

AlgorithmOneOutcome algorithm_one(const FeedbackSystem& sys, const MonicPoly& b,
                                  const AlgorithmOneConfig& cfg,
                                  const Tolerance& tol) {
  return algorithm_one_impl(sys, b, nullptr, cfg, tol);
}

AlgorithmOneOutcome algorithm_one(const FeedbackSystem& sys, const MonicPoly& b,
                                  const MonicPoly& d0,
                                  const AlgorithmOneConfig& cfg,
                                  const Tolerance& tol) {
  return algorithm_one_impl(sys, b, &d0, cfg, tol);
}

MonicPoly shift_roots(const MonicPoly& d, const ShiftConfig& cfg) {
  if (!(cfg.a >= 0.0) || !(cfg.b_coef >= 0.0) || !std::isfinite(cfg.a) ||
      !std::isfinite(cfg.b_coef))
    throw DomainError("shift_roots: step sizes must be finite and nonnegative");
  ComplexVector roots = poly_roots(d);
  const double total = roots.norm();
  for (Index i = 0; i < roots.size(); ++i) {
    if (cfg.shift_all_roots || roots[i].real() > 0.0) {
      const double shift = cfg.a * std::abs(roots[i]) + cfg.b_coef * total;
      roots[i] -= shift;  // real shift: conjugate pairs move together
    }
  }
  return poly_from_roots(roots);
}

namespace {

StabilizeOutcome stabilize_impl(const FeedbackSystem& sys, const MonicPoly* d0,
                                const ShiftConfig& scfg,
                                const AlgorithmOneConfig& ocfg,
                                const Tolerance& tol) {
  const Index m = sys.m();
  if (scfg.max_total_iters < 0)
    throw DomainError("stabilize_by_output_feedback: negative iteration budget");
  if (d0 && d0->degree() != sys.n())
    throw ShapeError(
        "stabilize_by_output_feedback: initial polynomial degree must equal n");

  Rng master(ocfg.seed);
  Rng init_rng = master.substream(0);

  const Matrix& A0 = sys.A();
  Matrix K = Matrix::Zero(m, sys.p());
  Matrix A_cur = A0;
  MonicPoly d = d0 ? *d0 : extract_annihilating(A0, init_rng, tol);

  // Root positions computed from coefficients jitter at roughly this scale;
  // the guards below must not react to it.
  constexpr double kRootSlack = 1e-9;

  ShiftConfig step_cfg = scfg;
  int stall = 0;
  const auto count_stall = [&] {
    if (++stall >= scfg.stall_window) {
      step_cfg.a = std::max(0.5 * step_cfg.a, scfg.a_floor);
      step_cfg.b_coef = std::max(0.5 * step_cfg.b_coef, scfg.b_floor);
      stall = 0;
    }
  };

  StabilizeOutcome out;
  int iter = 0;
  double rightmost_cur = rightmost_real(poly_roots(d));
  bool stabilized = rightmost_cur < 0.0;
  while (!stabilized && iter < scfg.max_total_iters) {
    ++iter;
    Rng iter_rng = master.substream(static_cast<std::uint64_t>(iter));
    const MonicPoly target = shift_roots(d, step_cfg);

    // Draw input combinations until one yields a step that does not push the
    // rightmost root further right; worse steps are rejected, degenerate
    // draws are skipped.
    std::optional<RankOneResult> step;
    ComplexVector step_roots;
    double step_rightmost = 0.0;
    for (std::uint64_t t = 0; t < 8 && !step; ++t) {
      Rng mu_rng = iter_rng.substream(t);
      try {
        RankOneResult cand = rank_one_update(
            A_cur, sys.B(), sys.C(), mu_rng.unit_vector(m), target, d, tol);
        ComplexVector roots = poly_roots(cand.d_new);
        const double r = rightmost_real(roots);
        if (r <= rightmost_cur + kRootSlack) {
          step = std::move(cand);
          step_roots = std::move(roots);
          step_rightmost = r;
        }
      } catch (const DependentPrefixError&) {
      } catch (const ConditioningError&) {
      }
    }

    if (!step) {
      // Every draw either degenerated or moved the rightmost root the wrong
      // way: the requested shift is too ambitious at this step size. Nothing
      // is applied; the iteration still consumes budget and shrinks the
      // target once the stall window fills.
      count_stall();
      continue;
    }

    K += step->K;
    A_cur = A0 + sys.B() * K * sys.C();
    d = step->d_new;

    out.trajectory.push_back({iter, step_rightmost, poly_distance(target, d),
                              step_cfg.a, step_cfg.b_coef, step_roots});
    stabilized = step_rightmost < 0.0;

    // Level steps keep the walk moving but still count toward the stall
    // window; only a strict decrease of the rightmost root resets it.
    if (step_rightmost >= rightmost_cur - kRootSlack)
      count_stall();
    else
      stall = 0;
    rightmost_cur = step_rightmost;
  }

  out.K_final = K;
  out.d_final = d;
  out.iterations_used = iter;

  // A gain that cannot be re-verified is not a successful stabilization,
  // however the roots look; the outcome still carries the full trajectory.
  Rng verify_rng =
      master.substream(static_cast<std::uint64_t>(scfg.max_total_iters) + 1);
  out.verification_mismatch =
      verify_feedback(A0, sys.B(), sys.C(), K, d, verify_rng, tol);
  out.success = stabilized && out.verification_mismatch <= kVerifyRelTol;
  return out;
}

}  // namespace

StabilizeOutcome stabilize_by_output_feedback(const FeedbackSystem& sys,
                                              const ShiftConfig& scfg,
                                              const AlgorithmOneConfig& ocfg,
                                              const Tolerance& tol) {
  return stabilize_impl(sys, nullptr, scfg, ocfg, tol);
}

StabilizeOutcome stabilize_by_output_feedback(const FeedbackSystem& sys,
                                              const MonicPoly& d0,
                                              const ShiftConfig& scfg,
                                              const AlgorithmOneConfig& ocfg,
                                              const Tolerance& tol) {
  return stabilize_impl(sys, &d0, scfg, ocfg, tol);
}

}  // namespace sofpoly
