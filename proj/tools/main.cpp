// Command line front end: instance generation, single updates, the
// accumulation and stabilization drivers, reachability checks, the three
// benchmark experiments, and certificate verification.

#include "sofpoly/driver.hpp"
#include "sofpoly/experiments.hpp"
#include "sofpoly/feedback.hpp"
#include "sofpoly/instances.hpp"
#include "sofpoly/io.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace sofpoly;

namespace {

Tolerance make_tol(Index n, double rank_opt, double res_opt) {
  Tolerance tol = Tolerance::standard(n);
  if (rank_opt > 0) tol.rank_tol = rank_opt;
  if (res_opt > 0) tol.residual_tol = res_opt;
  return tol;
}

struct LoadedInstance {
  FeedbackSystem sys;
  std::optional<Matrix> planted_K;
  std::optional<MonicPoly> target;
};

LoadedInstance load_instance(const std::string& path, double rank_opt, double res_opt) {
  InstanceFile f = read_instance_file(path);
  const Tolerance tol = make_tol(f.A.rows(), rank_opt, res_opt);
  return LoadedInstance{FeedbackSystem(std::move(f.A), std::move(f.B), std::move(f.C), tol),
                        std::move(f.planted_K), std::move(f.target)};
}

const MonicPoly& require_target(const LoadedInstance& inst, const char* who) {
  if (!inst.target)
    throw ParseError(std::string(who) + ": the instance file carries no target polynomial");
  return *inst.target;
}

double metric(const RepRecord& rec, const std::string& name) {
  for (const auto& [key, value] : rec.metrics)
    if (key == name) return value;
  throw DomainError("report record has no metric '" + name + "'");
}

double metric_or(const RepRecord& rec, const std::string& name, double fallback) {
  for (const auto& [key, value] : rec.metrics)
    if (key == name) return value;
  return fallback;
}

void print_histogram(const Histogram& h) {
  std::printf("%s  (total %lld)\n", h.name().c_str(), h.total());
  std::printf("  %-22s %lld\n", ("< 1e" + std::to_string(h.lo_exp())).c_str(), h.underflow());
  for (std::size_t k = 0; k < h.bins().size(); ++k) {
    const int lo = h.lo_exp() + static_cast<int>(k);
    const std::string label =
        "[1e" + std::to_string(lo) + ", 1e" + std::to_string(lo + 1) + ")";
    std::printf("  %-22s %lld\n", label.c_str(), h.bins()[k]);
  }
  std::printf("  %-22s %lld\n", (">= 1e" + std::to_string(h.hi_exp())).c_str(), h.overflow());
}

void print_report(const ExperimentReport& rep) {
  std::printf("experiment %s\n", rep.experiment.c_str());
  for (const auto& [key, value] : rep.config)
    std::printf("  %-22s %s\n", key.c_str(), value.c_str());
  for (const Histogram& h : rep.histograms) print_histogram(h);
  if (!rep.summary.empty()) {
    std::printf("summary\n");
    for (const auto& [key, value] : rep.summary)
      std::printf("  %-22s %.6g\n", key.c_str(), value);
  }
  std::printf("elapsed %.2f s\n", rep.elapsed_seconds);
}

void maybe_write_report(const std::string& out, const ExperimentReport& rep) {
  if (out.empty()) return;
  write_report_file(out, rep);
  std::printf("wrote %s\n", out.c_str());
}

// ---- subcommand bodies ----------------------------------------------------

struct GenOpts {
  InstanceSpec spec;
  bool unreachable = false;
  double eps_bound = 0.01;
  std::string out;
};

int run_gen(const GenOpts& o) {
  InstanceFile f;
  if (o.unreachable) {
    const TargetInstance inst = gen_unreachable_target(o.spec, o.eps_bound);
    f = InstanceFile{inst.sys.A(), inst.sys.B(), inst.sys.C(), std::nullopt, inst.target};
    std::printf("generated unreachable-target instance n=%ld m=%ld p=%ld seed=%llu\n",
                static_cast<long>(o.spec.n), static_cast<long>(o.spec.m),
                static_cast<long>(o.spec.p),
                static_cast<unsigned long long>(o.spec.seed));
  } else {
    const PlantedInstance inst = gen_instance(o.spec);
    f = InstanceFile{inst.sys.A(), inst.sys.B(), inst.sys.C(), inst.planted_K, inst.target};
    std::printf("generated planted instance n=%ld m=%ld p=%ld seed=%llu\n",
                static_cast<long>(o.spec.n), static_cast<long>(o.spec.m),
                static_cast<long>(o.spec.p),
                static_cast<unsigned long long>(o.spec.seed));
  }
  write_instance_file(o.out, f);
  std::printf("wrote %s\n", o.out.c_str());
  return 0;
}

struct SolveOpts {
  std::string in, out;
  std::uint64_t seed = 0;
  double tol_rank = 0, tol_res = 0;
};

int run_solve_rank1(const SolveOpts& o) {
  const LoadedInstance inst = load_instance(o.in, o.tol_rank, o.tol_res);
  const MonicPoly& b = require_target(inst, "solve-rank1");
  const Tolerance tol = make_tol(inst.sys.n(), o.tol_rank, o.tol_res);
  Rng rng(o.seed);
  const Vector mu = rng.unit_vector(inst.sys.m());
  const RankOneResult res = rank_one_update(inst.sys, mu, b, tol);

  std::printf("residual            %.6e\n", res.residual);
  std::printf("relative residual   %.6e\n", res.relative_residual);
  std::printf("classification      %s\n",
              to_string(classify_relative_residual(res.relative_residual)));
  std::printf("|K|_F               %.6e\n", res.K.norm());
  if (!o.out.empty()) {
    write_certificate_file(o.out, Certificate{inst.sys.A(), inst.sys.B(), inst.sys.C(),
                                              res.K, res.d_new, b, res.residual});
    std::printf("wrote %s\n", o.out.c_str());
  }
  return 0;
}

struct Algo1Opts {
  std::string in, out;
  AlgorithmOneConfig cfg;
  double tol_rank = 0, tol_res = 0;
};

int run_algorithm1(const Algo1Opts& o) {
  const LoadedInstance inst = load_instance(o.in, o.tol_rank, o.tol_res);
  const MonicPoly& b = require_target(inst, "algorithm1");
  const Tolerance tol = make_tol(inst.sys.n(), o.tol_rank, o.tol_res);
  const AlgorithmOneOutcome oc = algorithm_one(inst.sys, b, o.cfg, tol);

  const std::size_t stride = std::max<std::size_t>(1, oc.history.size() / 20);
  std::printf("%6s  %14s  %5s\n", "iter", "distance", "pick");
  for (std::size_t i = 0; i < oc.history.size(); ++i) {
    if (i % stride != 0 && i + 1 != oc.history.size()) continue;
    const IterationRecord& r = oc.history[i];
    std::printf("%6d  %14.6e  %5d\n", r.iteration, r.distance, r.chosen_index);
  }
  std::printf("%s after %d iterations, final distance %.6e\n",
              oc.success ? "converged" : "stopped", oc.iterations_used, oc.final_distance);
  std::printf("verification mismatch %.3e\n", oc.verification_mismatch);
  if (!o.out.empty()) {
    write_certificate_file(o.out, Certificate{inst.sys.A(), inst.sys.B(), inst.sys.C(),
                                              oc.K_final, oc.d_final, b, oc.final_distance});
    std::printf("wrote %s\n", o.out.c_str());
  }
  return oc.success ? 0 : 1;
}

struct ReachOpts {
  std::string in, ahat, out;
  double tol_rank = 0, tol_res = 0;
};

int run_check_reach(const ReachOpts& o) {
  const LoadedInstance inst = load_instance(o.in, o.tol_rank, o.tol_res);
  const Matrix A_hat = read_matrix_file(o.ahat);
  const Tolerance tol = make_tol(inst.sys.n(), o.tol_rank, o.tol_res);
  const ReachabilityVerdict v =
      bkc_reachability_check(inst.sys.A(), A_hat, inst.sys.B(), inst.sys.C(), tol);

  std::printf("column condition    %s\n", v.column_condition ? "holds" : "fails");
  std::printf("kernel condition    %s\n", v.kernel_condition ? "holds" : "fails");
  std::printf("max violation       %.6e\n", v.max_violation);
  std::printf("verdict             %s\n", v.reachable() ? "reachable" : "not reachable");
  if (v.reachable() && !o.out.empty()) {
    write_matrix_file(o.out, v.K);
    std::printf("wrote witness gain to %s\n", o.out.c_str());
  }
  return v.reachable() ? 0 : 1;
}

struct StabilizeOpts {
  std::string in, out;
  ShiftConfig scfg;
  std::uint64_t seed = 0;
  double tol_rank = 0, tol_res = 0;
};

int run_stabilize(const StabilizeOpts& o) {
  const LoadedInstance inst = load_instance(o.in, o.tol_rank, o.tol_res);
  const Tolerance tol = make_tol(inst.sys.n(), o.tol_rank, o.tol_res);
  AlgorithmOneConfig ocfg;
  ocfg.seed = o.seed;
  const StabilizeOutcome so = stabilize_by_output_feedback(inst.sys, o.scfg, ocfg, tol);

  std::printf("%6s  %12s  %10s  %10s\n", "iter", "rightmost", "a", "b");
  for (const StabilizeStep& st : so.trajectory)
    std::printf("%6d  %12.6f  %10.2e  %10.2e\n", st.iteration, st.rightmost, st.a, st.b_coef);
  std::printf("%s after %d iterations\n", so.success ? "stabilized" : "not stabilized",
              so.iterations_used);
  std::printf("verification mismatch %.3e\n", so.verification_mismatch);
  if (!o.out.empty()) {
    write_certificate_file(o.out,
                           Certificate{inst.sys.A(), inst.sys.B(), inst.sys.C(), so.K_final,
                                       so.d_final, so.d_final, 0.0});
    std::printf("wrote %s\n", o.out.c_str());
  }
  return so.success ? 0 : 1;
}

struct VerifyOpts {
  std::string in;
  std::uint64_t seed = 12345;
};

int run_verify(const VerifyOpts& o) {
  const std::string doctype = read_doctype(o.in);
  if (doctype == "certificate") {
    const Certificate cert = read_certificate_file(o.in);
    const double mismatch = verify_certificate(cert, o.seed);
    const bool ok = mismatch <= kVerifyRelTol;
    std::printf("certificate mismatch %.3e (%s)\n", mismatch, ok ? "pass" : "FAIL");
    return ok ? 0 : 1;
  }
  if (doctype == "report") {
    const ExperimentReport rep = read_report_file(o.in);
    long long total = 0;
    for (const RepRecord& rec : rep.reps) total += static_cast<long long>(rec.certificates.size());
    const long long failures = verify_report(rep, o.seed);
    std::printf("report certificates %lld, failures %lld (%s)\n", total, failures,
                failures == 0 ? "pass" : "FAIL");
    return failures == 0 ? 0 : 1;
  }
  throw ParseError(o.in + ": nothing to verify in a '" + doctype + "' document");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"static output feedback through annihilating polynomials"};
  app.require_subcommand(1);

  const std::map<std::string, CandidateMode> mode_map{
      {"columns", CandidateMode::columns},
      {"random", CandidateMode::random_combinations}};

  GenOpts gen;
  CLI::App* cgen = app.add_subcommand("gen", "generate a random instance file");
  cgen->add_option("--n", gen.spec.n, "state dimension")->capture_default_str();
  cgen->add_option("--m", gen.spec.m, "input count")->capture_default_str();
  cgen->add_option("--p", gen.spec.p, "output count")->capture_default_str();
  cgen->add_option("--seed", gen.spec.seed, "generator seed")->capture_default_str();
  cgen->add_option("--coeff-bound", gen.spec.coeff_bound,
                   "bound on characteristic polynomial coefficients")
      ->capture_default_str();
  cgen->add_option("--bc-bound", gen.spec.bc_bound, "bound on B and C entries")
      ->capture_default_str();
  cgen->add_option("--k-bound", gen.spec.k_bound, "bound on planted gain entries")
      ->capture_default_str();
  cgen->add_flag("--unreachable", gen.unreachable,
                 "perturb the open-loop polynomial instead of planting a gain");
  cgen->add_option("--eps-bound", gen.eps_bound, "perturbation bound for --unreachable")
      ->capture_default_str();
  cgen->add_option("--out", gen.out, "instance file to write")->required();

  SolveOpts solve;
  CLI::App* csol = app.add_subcommand("solve-rank1",
                                      "one rank-one update toward the instance target");
  csol->add_option("--in", solve.in, "instance file")->required();
  csol->add_option("--seed", solve.seed, "seed for the input direction")->capture_default_str();
  csol->add_option("--out", solve.out, "certificate file to write");
  csol->add_option("--tol-rank", solve.tol_rank, "rank tolerance override");
  csol->add_option("--tol-res", solve.tol_res, "residual tolerance override");

  Algo1Opts a1;
  CLI::App* calg = app.add_subcommand("algorithm1",
                                      "accumulate rank-one updates toward the target");
  calg->add_option("--in", a1.in, "instance file")->required();
  calg->add_option("--iters", a1.cfg.max_iters, "iteration budget")->capture_default_str();
  calg->add_option("--eps", a1.cfg.epsilon, "stop distance")->capture_default_str();
  calg->add_option("--mode", a1.cfg.mode, "candidate mode")
      ->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case))
      ->capture_default_str();
  calg->add_option("--per-iter", a1.cfg.combinations_per_iter,
                   "random candidates per iteration (0 = input count)")
      ->capture_default_str();
  calg->add_option("--seed", a1.cfg.seed, "driver seed")->capture_default_str();
  calg->add_option("--snapshot", a1.cfg.snapshot_iters, "record K and d at these iterations");
  calg->add_option("--out", a1.out, "certificate file to write");
  calg->add_option("--tol-rank", a1.tol_rank, "rank tolerance override");
  calg->add_option("--tol-res", a1.tol_res, "residual tolerance override");

  ReachOpts reach;
  CLI::App* crch = app.add_subcommand("check-reach",
                                      "test whether A_hat - A factors as B K C");
  crch->add_option("--in", reach.in, "instance file")->required();
  crch->add_option("--ahat", reach.ahat, "matrix file with the target closed loop")->required();
  crch->add_option("--out", reach.out, "matrix file for the witness gain");
  crch->add_option("--tol-rank", reach.tol_rank, "rank tolerance override");
  crch->add_option("--tol-res", reach.tol_res, "residual tolerance override");

  StabilizeOpts stab;
  CLI::App* cstb = app.add_subcommand("stabilize",
                                      "drive all roots into the left half plane");
  cstb->add_option("--in", stab.in, "instance file")->required();
  cstb->add_option("--iters", stab.scfg.max_total_iters, "iteration budget")
      ->capture_default_str();
  cstb->add_option("--shift-a", stab.scfg.a, "per-root shift factor")->capture_default_str();
  cstb->add_option("--shift-b", stab.scfg.b_coef, "norm-proportional shift factor")
      ->capture_default_str();
  cstb->add_flag("--all-roots", stab.scfg.shift_all_roots,
                 "shift every root, not only the unstable ones");
  cstb->add_option("--seed", stab.seed, "driver seed")->capture_default_str();
  cstb->add_option("--out", stab.out, "certificate file to write");
  cstb->add_option("--tol-rank", stab.tol_rank, "rank tolerance override");
  cstb->add_option("--tol-res", stab.tol_res, "residual tolerance override");

  ExperimentOneParams e1;
  std::string e1_out;
  CLI::App* cex1 = app.add_subcommand("exp1", "planted-gain recovery study");
  cex1->add_option("--seed", e1.spec.seed, "master seed")->capture_default_str();
  cex1->add_option("--reps", e1.reps, "instances to run")->capture_default_str();
  cex1->add_option("--n", e1.spec.n, "state dimension")->capture_default_str();
  cex1->add_option("--m", e1.spec.m, "input count")->capture_default_str();
  cex1->add_option("--p", e1.spec.p, "output count")->capture_default_str();
  cex1->add_option("--checkpoint", e1.checkpoint_iters, "checkpoint iteration")
      ->capture_default_str();
  cex1->add_option("--total", e1.total_iters, "total iterations")->capture_default_str();
  cex1->add_option("--out", e1_out, "report file to write");

  UnreachableExperimentParams eu;
  std::string eu_out;
  CLI::App* cexu = app.add_subcommand("exp1-unreach",
                                      "plateau and retarget study on perturbed targets");
  cexu->add_option("--seed", eu.spec.seed, "master seed")->capture_default_str();
  cexu->add_option("--reps", eu.reps, "instances to run")->capture_default_str();
  cexu->add_option("--n", eu.spec.n, "state dimension")->capture_default_str();
  cexu->add_option("--m", eu.spec.m, "input count")->capture_default_str();
  cexu->add_option("--p", eu.spec.p, "output count")->capture_default_str();
  cexu->add_option("--iters", eu.iters, "iterations per phase")->capture_default_str();
  cexu->add_option("--eps-bound", eu.eps_bound, "target perturbation bound")
      ->capture_default_str();
  cexu->add_option("--out", eu_out, "report file to write");

  ExperimentTwoParams e2;
  std::string e2_out;
  CLI::App* cex2 = app.add_subcommand("exp2", "stabilization study");
  cex2->add_option("--seed", e2.spec.seed, "master seed")->capture_default_str();
  cex2->add_option("--instances", e2.instances, "plants to stabilize")->capture_default_str();
  cex2->add_option("--n", e2.spec.n, "state dimension")->capture_default_str();
  cex2->add_option("--m", e2.spec.m, "input count")->capture_default_str();
  cex2->add_option("--p", e2.spec.p, "output count")->capture_default_str();
  cex2->add_option("--iters", e2.max_total_iters, "stabilization budget per plant")
      ->capture_default_str();
  cex2->add_option("--out", e2_out, "report file to write");

  VerifyOpts ver;
  CLI::App* cver = app.add_subcommand("verify",
                                      "re-check a certificate or report from scratch");
  cver->add_option("--in", ver.in, "certificate or report file")->required();
  cver->add_option("--seed", ver.seed, "seed for the fresh extraction")->capture_default_str();

  int rc = 0;
  cgen->callback([&] { rc = run_gen(gen); });
  csol->callback([&] { rc = run_solve_rank1(solve); });
  calg->callback([&] { rc = run_algorithm1(a1); });
  crch->callback([&] { rc = run_check_reach(reach); });
  cstb->callback([&] { rc = run_stabilize(stab); });
  cex1->callback([&] {
    const ExperimentReport rep = run_experiment_one(e1);
    print_report(rep);
    maybe_write_report(e1_out, rep);
  });
  cexu->callback([&] {
    const ExperimentReport rep = run_unreachable_experiment(eu);
    print_report(rep);
    maybe_write_report(eu_out, rep);
  });
  cex2->callback([&] {
    const ExperimentReport rep = run_experiment_two(e2);
    std::printf("%6s  %8s  %6s  %12s\n", "plant", "success", "iters", "rightmost");
    for (const RepRecord& rec : rep.reps) {
      const double rightmost = metric_or(rec, "rightmost_final",
                                         std::numeric_limits<double>::quiet_NaN());
      std::printf("%6lld  %8s  %6.0f  ", rec.index,
                  metric(rec, "success") > 0.5 ? "yes" : "no", metric(rec, "iterations"));
      if (std::isnan(rightmost))
        std::printf("%12s\n", "-");
      else
        std::printf("%12.6f\n", rightmost);
    }
    print_report(rep);
    maybe_write_report(e2_out, rep);
  });
  cver->callback([&] { rc = run_verify(ver); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
