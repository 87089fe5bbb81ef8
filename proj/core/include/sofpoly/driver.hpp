#pragma once

#include "sofpoly/feedback.hpp"
#include "sofpoly/poly.hpp"
#include "sofpoly/types.hpp"

#include <cstdint>
#include <vector>

namespace sofpoly {

/// How candidate input directions are drawn each outer iteration.
enum class CandidateMode { columns, random_combinations };

const char* to_string(CandidateMode mode);

struct AlgorithmOneConfig {
  double epsilon = 1e-9;  ///< stop once || b - d || falls below this (must be > 0)
  int max_iters = 1000;
  CandidateMode mode = CandidateMode::random_combinations;
  std::uint64_t seed = 0;
  /// Candidates drawn per iteration in random_combinations mode; 0 means m.
  int combinations_per_iter = 0;
  /// Record the accumulated gain and carried polynomial when the iteration
  /// counter reaches each of these values.
  std::vector<int> snapshot_iters{};
  /// Consecutive no-progress iterations tolerated before giving up.
  int max_stagnant_iters = 10;
};

struct IterationRecord {
  int iteration;
  double distance;   ///< || b - d || after the applied update
  int chosen_index;  ///< candidate picked this iteration, -1 if none usable
};

struct AlgorithmSnapshot {
  int iteration;
  Matrix K;
  MonicPoly d;
};

struct AlgorithmOneOutcome {
  bool success = false;
  Matrix K_final;
  MonicPoly d_final;
  std::vector<IterationRecord> history;  ///< distances are nonincreasing
  std::vector<AlgorithmSnapshot> snapshots;
  int iterations_used = 0;
  double final_distance = 0.0;
  /// Relative mismatch of the closing independent re-extraction of the
  /// annihilating polynomial of A + B K_final C against d_final.
  double verification_mismatch = 0.0;
};

/// Greedy accumulation of rank-one output-feedback updates toward target b:
/// each iteration evaluates one update candidate per input direction (the
/// columns of B, or random unit combinations of them), applies the candidate
/// whose resulting polynomial is closest to b (ties break to the lowest
/// index), and rebuilds the working matrix as A + B K_accumulated C from the
/// original A. Iterations where no candidate improves the distance beyond
/// rounding noise apply nothing; after max_stagnant_iters consecutive such
/// iterations the run stops early. Also ends on distance < epsilon or the
/// iteration budget. The final gain is re-verified independently; a mismatch
/// above kVerifyRelTol throws VerificationError.
AlgorithmOneOutcome algorithm_one(const FeedbackSystem& sys, const MonicPoly& b,
                                  const AlgorithmOneConfig& cfg,
                                  const Tolerance& tol);

/// Same driver, but starting from a caller-supplied annihilating polynomial
/// of A instead of extracting one. When A is built in companion form its
/// polynomial is known exactly, and passing it here keeps the carried
/// coefficient sequence free of the initial extraction's conditioning error.
AlgorithmOneOutcome algorithm_one(const FeedbackSystem& sys, const MonicPoly& b,
                                  const MonicPoly& d0,
                                  const AlgorithmOneConfig& cfg,
                                  const Tolerance& tol);

struct ShiftConfig {
  double a = 0.1;        ///< per-root shift proportional to |root|
  double b_coef = 1e-3;  ///< shift proportional to the norm of the root vector
  double a_floor = 1e-4;
  double b_floor = 1e-6;
  bool shift_all_roots = false;  ///< default shifts only roots with Re > 0
  int max_total_iters = 200;
  /// Halve a and b_coef after this many consecutive steps where the
  /// rightmost real part failed to decrease.
  int stall_window = 3;
};

/// Shifted-root target: every selected root r moves left by
/// a * |r| + b_coef * ||roots||. Conjugate pairs shift by the same real
/// amount, so the result stays real.
MonicPoly shift_roots(const MonicPoly& d, const ShiftConfig& cfg);

struct StabilizeStep {
  int iteration;
  double rightmost;  ///< max real part of the roots after the step
  double distance;   ///< || b_shifted - d_new || for the step's own target
  double a;
  double b_coef;
  ComplexVector roots;  ///< root multiset after the step
};

struct StabilizeOutcome {
  /// All roots strictly in the left half plane and the accumulated gain
  /// passed independent re-verification.
  bool success = false;
  Matrix K_final;
  MonicPoly d_final;
  int iterations_used = 0;
  std::vector<StabilizeStep> trajectory;
  double verification_mismatch = 0.0;
};

/// Iterated stabilization: at each step retarget the current annihilating
/// polynomial with shift_roots and apply one rank-one update from a random
/// input combination, accumulating the output-feedback gain. Candidate steps
/// whose rightmost root real part would increase are rejected (fresh
/// combinations are drawn instead), and the step sizes halve after
/// stall_window consecutive iterations without progress. Budget exhaustion
/// with roots still in the right half plane, like a final gain that misses
/// re-verification, is reported as non-success, not an error.
StabilizeOutcome stabilize_by_output_feedback(const FeedbackSystem& sys,
                                              const ShiftConfig& scfg,
                                              const AlgorithmOneConfig& ocfg,
                                              const Tolerance& tol);

/// Same driver, but starting from a caller-supplied annihilating polynomial
/// of A instead of extracting one. When A arose from an earlier feedback
/// computation its polynomial is already known to high accuracy, and passing
/// it here keeps the carried coefficient sequence free of a fresh
/// extraction's conditioning error.
StabilizeOutcome stabilize_by_output_feedback(const FeedbackSystem& sys,
                                              const MonicPoly& d0,
                                              const ShiftConfig& scfg,
                                              const AlgorithmOneConfig& ocfg,
                                              const Tolerance& tol);

}  // namespace sofpoly
