#include <cmath>

#include "doctest.h"
#include "espdg/cases.hpp"
#include "espdg/implicit.hpp"
#include "espdg/rng.hpp"

using namespace espdg;

namespace {

Problem small_problem(double kappa_beta, double t_ch = 10.0) {
  CaseConfig cfg;
  cfg.case_name = "random";
  cfg.physics.rho1 = 1000.0;
  cfg.physics.rho2 = 1.0;
  cfg.physics.eta1 = 1e-3;
  cfg.physics.eta2 = 1e-4;
  cfg.physics.sigma = 1.0;
  cfg.physics.eps = 0.75;
  cfg.physics.t_ch = t_ch;
  cfg.physics.c0_sqr = 100.0;
  cfg.physics.kappa_beta = kappa_beta;
  cfg.seed = 31;
  cfg.mesh.counts = {2, 2, 1};
  cfg.mesh.degrees = {3, 3, 2};
  cfg.mesh.periodic = {true, true, true};
  return make_problem(cfg);
}

}  // namespace

TEST_CASE("implicit operator oracle: assembled vs matrix-free") {
  for (double kb : {0.0, 1.0}) {
    Problem prob = small_problem(kb);
    DgOperator op(prob.mesh, prob.params);
    ImplicitChOperator implicit(op, kb);
    const int n = implicit.size();
    Rng rng(101);
    std::vector<double> x(n), ya, yb;
    for (int trial = 0; trial < 50; ++trial) {
      for (auto &v : x) v = rng.uniform(-1, 1);
      implicit.apply_assembled(1.5, 1e-4, x, ya);
      implicit.apply_matrix_free(1.5, 1e-4, x, yb);
      double diff = 0.0, scale = 1.0;
      for (int i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(ya[i] - yb[i]));
        scale = std::max(scale, std::abs(yb[i]));
      }
      CHECK(diff <= 1e-10 * scale);
    }
  }
}

TEST_CASE("biharmonic of a constant vanishes: A 1 = (gamma0/dt) Jw") {
  Problem prob = small_problem(1.0);
  DgOperator op(prob.mesh, prob.params);
  ImplicitChOperator implicit(op, 1.0);
  const int n = implicit.size();
  std::vector<double> ones(n, 1.0), y;
  const double gamma0 = 1.0, dt = 1e-3;
  implicit.apply_assembled(gamma0, dt, ones, y);
  const auto &jw = op.dof_mass();
  for (int i = 0; i < n; ++i)
    CHECK(y[i] == doctest::Approx(gamma0 / dt * jw[i]).epsilon(1e-9));
}

TEST_CASE("vanishing mobility leaves a diagonal solve") {
  Problem prob = small_problem(0.0, /*t_ch=*/1e14);  // M0 -> 0
  DgOperator op(prob.mesh, prob.params);
  ImplicitChOperator implicit(op, 0.0);
  implicit.factorize(1.0, 1e-3);
  const int n = implicit.size();
  Rng rng(7);
  std::vector<double> rhs(n), c;
  for (auto &v : rhs) v = rng.uniform(-1, 1);
  implicit.solve(1.0, 1e-3, rhs, c);
  for (int i = 0; i < n; ++i) CHECK(c[i] == doctest::Approx(1e-3 * rhs[i]).epsilon(1e-7));
}

TEST_CASE("solve round trip and factorization bookkeeping") {
  Problem prob = small_problem(0.0);
  DgOperator op(prob.mesh, prob.params);
  ImplicitChOperator implicit(op, 0.0);
  implicit.factorize(1.0, 1e-4);
  implicit.factorize(1.5, 1e-4);
  const int n = implicit.size();
  Rng rng(13);
  std::vector<double> rhs(n), c, back;
  for (auto &v : rhs) v = rng.uniform(-1, 1);
  for (double gamma0 : {1.0, 1.5}) {
    implicit.solve(gamma0, 1e-4, rhs, c);
    implicit.apply_assembled(gamma0, 1e-4, c, back);
    const auto &jw = op.dof_mass();
    for (int i = 0; i < n; ++i)
      CHECK(back[i] == doctest::Approx(jw[i] * rhs[i]).epsilon(1e-8));
  }
  CHECK_THROWS_WITH_AS(implicit.solve(1.25, 1e-4, rhs, c), doctest::Contains("factorization"),
                       Error);
  CHECK_THROWS_AS(implicit.factorize(-1.0, 1e-4), Error);
}
