#pragma once

#include "sofpoly/driver.hpp"
#include "sofpoly/instances.hpp"
#include "sofpoly/poly.hpp"
#include "sofpoly/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sofpoly {

/// Self-contained proof of a solver run: everything needed to rebuild
/// A + B K C and re-extract its annihilating polynomial from scratch.
struct Certificate {
  Matrix A, B, C, K;
  MonicPoly d_claimed;  ///< claimed annihilating polynomial of A + B K C
  MonicPoly target;     ///< polynomial the run was steering toward
  double residual;      ///< || target - d_claimed ||
};

/// Decade-binned counter over [10^lo_exp, 10^hi_exp), one bin per decade,
/// with explicit underflow and overflow counters so totals always match the
/// number of samples.
class Histogram {
 public:
  Histogram(std::string name, int lo_exp, int hi_exp);

  void add(double value);
  long long total() const;

  const std::string& name() const { return name_; }
  int lo_exp() const { return lo_exp_; }
  int hi_exp() const { return hi_exp_; }
  const std::vector<long long>& bins() const { return bins_; }
  long long underflow() const { return underflow_; }
  long long overflow() const { return overflow_; }

  /// Rebuild from serialized state; bin count must equal hi_exp - lo_exp.
  static Histogram restore(std::string name, int lo_exp, int hi_exp,
                           std::vector<long long> bins, long long underflow,
                           long long overflow);

 private:
  std::string name_;
  int lo_exp_, hi_exp_;
  std::vector<long long> bins_;
  long long underflow_ = 0, overflow_ = 0;
};

struct RepRecord {
  long long index = 0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, Certificate>> certificates;
  std::vector<std::pair<std::string, Matrix>> tables;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<RepRecord> reps;
  std::vector<Histogram> histograms;
  std::vector<std::pair<std::string, double>> summary;
  /// Wall-clock time, echoed to stdout only. Deliberately not serialized:
  /// report files must be byte-identical across reruns with the same seed.
  double elapsed_seconds = 0.0;
};

/// Planted-gain recovery study: random instances with a small planted K,
/// target b = annihilating polynomial of A + B K C, driven by the rank-one
/// accumulation solver in random-combinations mode. Metrics and decade
/// histograms are recorded at checkpoint_iters and total_iters.
struct ExperimentOneParams {
  InstanceSpec spec;
  int reps = 50;
  int checkpoint_iters = 1000;
  int total_iters = 1500;
};
ExperimentReport run_experiment_one(const ExperimentOneParams& params);

/// Reachable/unreachable separation: phase one drives toward a perturbed
/// (generically unreachable) target and records the plateau; phase two
/// restarts from scratch toward the polynomial phase one actually reached,
/// which is reachable by construction, and records how closely it returns.
struct UnreachableExperimentParams {
  InstanceSpec spec;
  int reps = 50;
  int iters = 1000;
  double eps_bound = 0.01;
};
ExperimentReport run_unreachable_experiment(const UnreachableExperimentParams& params);

/// Stabilization study: bootstrap a destabilized plant (stable companion A',
/// integer B and C, then drive the closed loop until the annihilating
/// polynomial has roots in the right half plane and freeze that matrix as A),
/// then stabilize it with the shifted-root driver within max_total_iters.
struct ExperimentTwoParams {
  InstanceSpec spec{.n = 10, .m = 2, .p = 3};
  int instances = 10;
  int max_total_iters = 200;
  ShiftConfig shift{};
};
ExperimentReport run_experiment_two(const ExperimentTwoParams& params);

/// Rebuild A + B K C from the certificate alone and re-extract its
/// annihilating polynomial with a fresh seeded vector; returns the relative
/// coefficient mismatch against d_claimed.
double verify_certificate(const Certificate& cert, std::uint64_t seed);

/// Re-check every certificate embedded in a report; returns the number that
/// miss kVerifyRelTol.
long long verify_report(const ExperimentReport& report, std::uint64_t seed);

}  // namespace sofpoly
