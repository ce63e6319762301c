#include <omp.h>

#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "espdg/diagnostics.hpp"
#include "espdg/rng.hpp"
#include "espdg/runner.hpp"
#include "espdg/time.hpp"

namespace {

using namespace espdg;

int cmd_run(const std::string &config_path, long seed, int threads, const std::string &out_dir) {
  if (threads > 0) omp_set_num_threads(threads);
  CaseConfig cfg = load_config(config_path);
  if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
  if (!out_dir.empty()) cfg.output.dir = out_dir;
  const RunResult res = run_case(cfg);
  std::printf("case=%s steps=%ld t_end=%.6g exit=%d entropy=%.6e |v|=%.3e\n",
              cfg.case_name.c_str(), res.steps, res.t_end, res.exit_code,
              res.final_entropy, res.final_velocity_norm);
  return res.exit_code;
}

bool check(const char *name, bool ok, double value, double bound) {
  std::printf("%-38s %s   (%.3e <= %.1e)\n", name, ok ? "PASS" : "FAIL", value, bound);
  return ok;
}

// Property suite: SBP identity, free-stream preservation, entropy
// contraction, and the per-step entropy remainder of a short random run.
int cmd_verify() {
  bool all = true;

  double sbp_worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const NodalBasis b(n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        double bij = 0.0;
        if (i == j && i == 0) bij = -1.0;
        if (i == j && i == n) bij = 1.0;
        const double q = b.weight(i) * b.d(i, j) + b.weight(j) * b.d(j, i);
        sbp_worst = std::max(sbp_worst, std::abs(q - bij));
      }
  }
  all &= check("SBP identity (N=1..10)", sbp_worst <= 1e-13, sbp_worst, 1e-13);

  {
    MeshSpec spec;
    spec.lower = {0, 0, 0};
    spec.upper = {1, 1, 1};
    spec.counts = {4, 4, 4};
    spec.degrees = {4, 4, 4};
    spec.periodic = {true, true, true};
    spec.mapping = "sine3d";
    Mesh mesh = build_mesh(spec);
    PhysParams par;
    par.rho1 = 2.0;
    par.rho2 = 1.0;
    par.sigma = 1.0;
    par.eps = 0.3;
    par.t_ch = 10.0;
    par.c0_sqr = 1.0;
    DgOperator op(mesh, par);
    Field q(mesh), dqdt(mesh);
    const double sr = std::sqrt(density(0.7, par));
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p)
        q.set_state(e, p, {0.7, sr * 0.3, sr * (-0.2), sr * 0.5, 2.0});
    OperatorOptions opt;
    opt.mode = FluxMode::ers;
    op.eval_residual(q, dqdt, opt);
    const double fs = max_norm(dqdt);
    all &= check("free-stream preservation (4^3, N=4)", fs <= 1e-10, fs, 1e-10);
  }

  {
    PhysParams par;
    par.rho1 = 900.0;
    par.rho2 = 1.2;
    par.sigma = 0.07;
    par.eps = 0.02;
    Rng rng(7);
    double worst = 0.0;
    for (int it = 0; it < 1000; ++it) {
      const State q{rng.uniform(-0.2, 1.2), rng.uniform(-5, 5), rng.uniform(-5, 5),
                    rng.uniform(-5, 5), rng.uniform(-10, 10)};
      const double mu = rng.uniform(-3, 3);
      const State w = entropy_vars(q, mu, par);
      const BlockState fe = inviscid_flux(q, par);
      const auto phi = noncons_coefficients(q, par);
      for (int m = 0; m < 5; ++m)
        for (int d = 0; d < 3; ++d) {
          double lhs = fe.slot(d)[m];
          double rhs = 0.0;
          for (int r = 0; r < 5; ++r) rhs += w[r] * phi[m].slot(d)[r];
          const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
          worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
    }
    all &= check("entropy contraction (1000 states)", worst <= 1e-12, worst, 1e-12);
  }

  {
    CaseConfig cfg;
    cfg.case_name = "random";
    cfg.seed = 11;
    cfg.flux_mode = "central";
    cfg.physics.rho1 = 1000.0;
    cfg.physics.rho2 = 1.0;
    cfg.physics.eta1 = 1e-3;
    cfg.physics.eta2 = 1e-4;
    cfg.physics.eps = 0.75;
    cfg.physics.t_ch = 10.0;
    cfg.physics.c0_sqr = 100.0;
    cfg.physics.sigma = 1.0;
    cfg.mesh.counts = {2, 2, 2};
    cfg.mesh.degrees = {3, 3, 3};
    cfg.mesh.periodic = {true, true, true};
    Problem prob = make_problem(cfg);
    DgOperator op(prob.mesh, prob.params);
    Field q = prob.q0, dqdt(prob.mesh);
    OperatorOptions opt = prob.options();
    Rk3Integrator rk3(op, opt);
    op.eval_residual(q, dqdt, opt);
    const double e0 = entropy_report(op, q, dqdt, opt, 0.0).e_total;
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      rk3.step(q, s * 1e-5, 1e-5);
      op.eval_residual(q, dqdt, opt);
      worst = std::max(worst, std::abs(entropy_report(op, q, dqdt, opt, 0.0).remainder));
    }
    const double bound = 1e-9 * e0;
    all &= check("entropy remainder (central, 20 steps)", worst <= bound, worst, bound);
  }

  std::printf("verify: %s\n", all ? "all PASS" : "FAILURES");
  return all ? 0 : 1;
}

int cmd_sweep(const std::string &config_path, long seed_a, long seed_b,
              const std::string &out_dir) {
  CaseConfig base = config_path.empty() ? CaseConfig{} : load_config(config_path);
  if (base.case_name != "random") base.case_name = "random";
  int failures = 0;
  for (long s = seed_a; s <= seed_b; ++s) {
    CaseConfig cfg = base;
    cfg.seed = static_cast<uint64_t>(s);
    cfg.output.dir = (out_dir.empty() ? base.output.dir : out_dir) + "/seed_" + std::to_string(s);
    cfg.output.write_fields = false;
    const RunResult res = run_case(cfg);
    std::printf("seed=%-4ld exit=%d steps=%ld entropy: final=%.6e max=%.6e\n", s, res.exit_code,
                res.steps, res.final_entropy, res.max_entropy);
    if (res.exit_code != 0) ++failures;
  }
  std::printf("sweep: %d failures over seeds %ld..%ld\n", failures, seed_a, seed_b);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"entropy-stable DGSEM two-phase flow solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long seed = -1;
  int threads = 0;
  auto *run = app.add_subcommand("run", "run a case from a config file");
  run->add_option("config", config_path, "config file (JSON)")->required();
  run->add_option("--seed", seed, "override the RNG seed");
  run->add_option("--threads", threads, "OpenMP thread count");
  run->add_option("--out", out_dir, "output directory");

  auto *verify = app.add_subcommand("verify", "run the property suite");

  std::string sweep_config, sweep_out;
  std::string sweep_case = "random";
  long seed_a = 0, seed_b = 9;
  auto *sweep = app.add_subcommand("sweep", "run a batch of seeds");
  sweep->add_option("--case", sweep_case, "case name (random)");
  sweep->add_option("--config", sweep_config, "base config file");
  sweep->add_option("--seeds", [&seed_a, &seed_b](const std::vector<std::string> &v) {
    const auto &s = v.at(0);
    const auto dots = s.find("..");
    if (dots == std::string::npos) return false;
    seed_a = std::stol(s.substr(0, dots));
    seed_b = std::stol(s.substr(dots + 2));
    return true;
  }, "seed range A..B");
  sweep->add_option("--out", sweep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, threads, out_dir);
    if (verify->parsed()) return cmd_verify();
    if (sweep->parsed()) {
      if (sweep_case != "random") throw espdg::Error("sweep supports only the random case");
      return cmd_sweep(sweep_config, seed_a, seed_b, sweep_out);
    }
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
