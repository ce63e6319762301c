#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "espdg/cases.hpp"
#include "espdg/diagnostics.hpp"
#include "espdg/mms.hpp"
#include "espdg/rng.hpp"
#include "espdg/runner.hpp"
#include "espdg/time.hpp"
#include "espdg/vtk.hpp"

using namespace espdg;

namespace {

PhysParams mms_params() {
  PhysParams p;
  p.rho1 = 1.0;
  p.rho2 = 2.0;
  p.eta1 = 1e-3;
  p.eta2 = 1e-3;
  p.eps = 1.0 / std::sqrt(2.0);
  p.t_ch = 1e3;
  p.c0_sqr = 1e3;
  p.sigma = 6.236e-3;
  return p;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// The hard-coded manufactured source against a centered finite-difference
// evaluation of the strong-form operator on the exact fields.
TEST_CASE("manufactured source matches the finite-difference oracle") {
  const PhysParams par = mms_params();
  const double h = 1e-5;
  Rng rng(2024);

  auto comp = [&](double x, double y, double t, int m) {
    return mms::exact_state({x, y, 0}, t, par)[m];
  };
  auto cval = [&](double x, double y, double t) { return comp(x, y, t, 0); };
  auto uval = [&](double x, double y, double t) {
    return velocity(mms::exact_state({x, y, 0}, t, par), par).x;
  };
  auto vval = [&](double x, double y, double t) {
    return velocity(mms::exact_state({x, y, 0}, t, par), par).y;
  };
  auto pval = [&](double x, double y, double t) { return comp(x, y, t, 4); };
  auto muval = [&](double x, double y, double t) { return mms::exact_mu({x, y, 0}, t, par); };

  auto dx = [&](auto &&f, double x, double y, double t) {
    return (f(x + h, y, t) - f(x - h, y, t)) / (2 * h);
  };
  auto dy = [&](auto &&f, double x, double y, double t) {
    return (f(x, y + h, t) - f(x, y - h, t)) / (2 * h);
  };
  auto dt = [&](auto &&f, double x, double y, double t) {
    return (f(x, y, t + h) - f(x, y, t - h)) / (2 * h);
  };
  auto lap = [&](auto &&f, double x, double y, double t) {
    return (f(x + h, y, t) + f(x - h, y, t) + f(x, y + h, t) + f(x, y - h, t) -
            4.0 * f(x, y, t)) /
           (h * h);
  };

  for (int it = 0; it < 20; ++it) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1), t = rng.uniform(0.1, 2.0);
    const double c = cval(x, y, t), u = uval(x, y, t), v = vval(x, y, t);
    const double rho = density(c, par), eta = viscosity(c, par);

    State fd{};
    fd[0] = dt(cval, x, y, t) +
            dx([&](double a, double b, double s) { return cval(a, b, s) * uval(a, b, s); }, x, y,
               t) +
            dy([&](double a, double b, double s) { return cval(a, b, s) * vval(a, b, s); }, x, y,
               t) -
            par.mobility() * lap(muval, x, y, t);

    auto srho_u = [&](double a, double b, double s) { return comp(a, b, s, 1); };
    auto srho_v = [&](double a, double b, double s) { return comp(a, b, s, 2); };
    auto fxx = [&](double a, double b, double s) {
      return 0.5 * density(cval(a, b, s), par) * uval(a, b, s) * uval(a, b, s) + pval(a, b, s);
    };
    auto fxy = [&](double a, double b, double s) {
      return 0.5 * density(cval(a, b, s), par) * uval(a, b, s) * vval(a, b, s);
    };
    auto fyy = [&](double a, double b, double s) {
      return 0.5 * density(cval(a, b, s), par) * vval(a, b, s) * vval(a, b, s) + pval(a, b, s);
    };
    auto tau_xx = [&](double a, double b, double s) {
      return 2.0 * viscosity(cval(a, b, s), par) * dx(uval, a, b, s);
    };
    auto tau_xy = [&](double a, double b, double s) {
      return viscosity(cval(a, b, s), par) * (dy(uval, a, b, s) + dx(vval, a, b, s));
    };
    auto tau_yy = [&](double a, double b, double s) {
      return 2.0 * viscosity(cval(a, b, s), par) * dy(vval, a, b, s);
    };

    fd[1] = std::sqrt(rho) * dt(srho_u, x, y, t) + dx(fxx, x, y, t) + dy(fxy, x, y, t) +
            0.5 * rho * (u * dx(uval, x, y, t) + v * dy(uval, x, y, t)) +
            c * dx(muval, x, y, t) - dx(tau_xx, x, y, t) - dy(tau_xy, x, y, t);
    fd[2] = std::sqrt(rho) * dt(srho_v, x, y, t) + dx(fxy, x, y, t) + dy(fyy, x, y, t) +
            0.5 * rho * (u * dx(vval, x, y, t) + v * dy(vval, x, y, t)) +
            c * dy(muval, x, y, t) - dx(tau_xy, x, y, t) - dy(tau_yy, x, y, t);
    fd[3] = 0.0;
    fd[4] = dt(pval, x, y, t) +
            par.rho0c0sqr() * (dx(uval, x, y, t) + dy(vval, x, y, t));
    (void)eta;

    const State hard = mms::source({x, y, 0}, t, par);
    double scale = 1.0;
    for (int m = 0; m < 5; ++m) scale = std::max(scale, std::abs(hard[m]));
    for (int m = 0; m < 5; ++m) CHECK(std::abs(fd[m] - hard[m]) <= 1e-6 * scale);
  }
}

TEST_CASE("manufactured case setup") {
  CaseConfig cfg;
  cfg.case_name = "manufactured";
  cfg.physics = mms_params();
  cfg.mesh.counts = {4, 4, 1};
  cfg.mesh.degrees = {3, 3, 1};
  Problem prob = make_problem(cfg);
  SUBCASE("initial fields: c = 1/2, velocities zero") {
    for (int e = 0; e < prob.mesh.n_elements(); ++e)
      for (int p = 0; p < prob.mesh.nodes_per_element(); ++p) {
        CHECK(prob.q0.at(e, p)[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(prob.q0.at(e, p)[1] == 0.0);
        CHECK(prob.q0.at(e, p)[2] == 0.0);
      }
  }
  SUBCASE("non-square domain rejected") {
    CaseConfig bad = cfg;
    bad.mesh.counts = {4, 5, 1};
    CHECK_THROWS_AS(make_problem(bad), Error);
  }
}

TEST_CASE("random case is seed deterministic") {
  CaseConfig cfg;
  cfg.case_name = "random";
  cfg.seed = 1234;
  cfg.mesh.counts = {2, 2, 2};
  cfg.mesh.degrees = {3, 3, 3};
  Problem a = make_problem(cfg);
  Problem b = make_problem(cfg);
  CHECK(a.q0.raw() == b.q0.raw());
  cfg.seed = 1235;
  Problem c = make_problem(cfg);
  CHECK(a.q0.raw() != c.q0.raw());
  // ranges: c in [0,1], p in [-1,1]
  for (int e = 0; e < a.mesh.n_elements(); ++e)
    for (int p = 0; p < a.mesh.nodes_per_element(); ++p) {
      CHECK(a.q0.at(e, p)[0] >= 0.0);
      CHECK(a.q0.at(e, p)[0] <= 1.0);
      CHECK(std::abs(a.q0.at(e, p)[4]) <= 1.0);
    }
}

TEST_CASE("bubble cases") {
  SUBCASE("static bubble starts at rest with a circular interface") {
    CaseConfig cfg;
    cfg.case_name = "static_bubble";
    cfg.physics.rho1 = cfg.physics.rho2 = 1.0;
    cfg.physics.eta1 = cfg.physics.eta2 = 1.0;
    cfg.physics.eps = 0.16;
    cfg.physics.t_ch = 7.0;
    cfg.physics.c0_sqr = 1e3;
    cfg.mesh.counts = {16, 16, 1};
    cfg.mesh.degrees = {2, 2, 1};
    Problem prob = make_problem(cfg);
    double cmin = 1e300, cmax = -1e300;
    for (int e = 0; e < prob.mesh.n_elements(); ++e)
      for (int p = 0; p < prob.mesh.nodes_per_element(); ++p) {
        cmin = std::min(cmin, prob.q0.at(e, p)[0]);
        cmax = std::max(cmax, prob.q0.at(e, p)[0]);
        CHECK(prob.q0.at(e, p)[1] == 0.0);
      }
    CHECK(cmin <= 1e-6);
    CHECK(cmax >= 1.0 - 1e-6);
  }
  SUBCASE("rising bubble starts centered with zero velocity moments") {
    CaseConfig cfg;
    cfg.case_name = "rising_bubble";
    cfg.physics.rho1 = 1000.0;
    cfg.physics.rho2 = 100.0;
    cfg.physics.eta1 = 10.0;
    cfg.physics.eta2 = 1.0;
    cfg.physics.sigma = 24.5;
    cfg.physics.eps = 0.03;
    cfg.physics.t_ch = 1e3;
    cfg.physics.c0_sqr = 1e3;
    cfg.physics.gravity = {0, -0.98, 0};
    cfg.mesh.counts = {8, 16, 1};
    cfg.mesh.degrees = {3, 3, 1};
    Problem prob = make_problem(cfg);
    const BubbleObservables b = bubble_observables(prob.mesh, prob.q0, prob.params);
    CHECK(b.xc.x == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(b.xc.y == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(std::abs(b.vc.x) <= 1e-14);
    CHECK(std::abs(b.vc.y) <= 1e-14);
  }
}

TEST_CASE("config round trip is idempotent") {
  CaseConfig cfg;
  cfg.case_name = "rising_bubble";
  cfg.physics.rho1 = 1000.0;
  cfg.physics.gravity = {0, -0.98, 0};
  cfg.physics.theta_w = M_PI / 4;
  cfg.physics.kappa_beta = 1.0;
  cfg.flux_mode = "central";
  cfg.integrator.kind = "rk3";
  cfg.integrator.dt = 7.2e-7;
  cfg.t_final = 3.0;
  cfg.seed = 99;
  const std::string text = serialize_config(cfg);
  const CaseConfig back = parse_config(text);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("config errors carry context") {
  CHECK_THROWS_WITH_AS(parse_config("{not json"), doctest::Contains("parse error"), Error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"flux_mode": "upwind"})"),
                       doctest::Contains("flux_mode"), Error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"integrator": {"kind": "imex", "dt": -1}})"),
                       doctest::Contains("dt"), Error);
}

TEST_CASE("runner contracts") {
  namespace fs = std::filesystem;
  const std::string base = (fs::temp_directory_path() / "espdg_runner_test").string();
  fs::remove_all(base);

  SUBCASE("t_final = 0 writes the initial snapshot only and exits 0") {
    CaseConfig cfg;
    cfg.case_name = "random";
    cfg.seed = 4;
    cfg.mesh.counts = {2, 2, 1};
    cfg.mesh.degrees = {2, 2, 1};
    cfg.t_final = 0.0;
    cfg.output.dir = base + "/zero";
    const RunResult res = run_case(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.steps == 0);
    CHECK(fs::exists(cfg.output.dir + "/fields_0000000.vtk"));
    CHECK(fs::exists(cfg.output.dir + "/fields_final.vtk"));
    CHECK(fs::exists(cfg.output.dir + "/diagnostics.csv"));
    CHECK(fs::exists(cfg.output.dir + "/summary.json"));
  }

  SUBCASE("a blow-up exits 2 and keeps the last good snapshot") {
    CaseConfig cfg;
    cfg.case_name = "random";
    cfg.seed = 4;
    cfg.mesh.counts = {2, 2, 1};
    cfg.mesh.degrees = {2, 2, 1};
    cfg.physics.rho1 = 1000.0;
    cfg.physics.c0_sqr = 1e3;
    cfg.integrator.kind = "rk3";
    cfg.integrator.dt = 0.5;  // far outside the stability region
    cfg.t_final = 10.0;
    cfg.output.dir = base + "/nan";
    const RunResult res = run_case(cfg);
    CHECK(res.exit_code == 2);
    CHECK(fs::exists(cfg.output.dir + "/restart_lastgood.bin"));
    CHECK(fs::exists(cfg.output.dir + "/failure.txt"));
  }

  SUBCASE("fixed seed reproduces the diagnostics CSV bitwise") {
    CaseConfig cfg;
    cfg.case_name = "random";
    cfg.seed = 7;
    cfg.mesh.counts = {2, 2, 2};
    cfg.mesh.degrees = {2, 2, 2};
    cfg.integrator.kind = "rk3";
    cfg.integrator.dt = 1e-5;
    cfg.t_final = 3e-4;
    cfg.output.cadence_steps = 10;
    cfg.output.write_fields = false;
    cfg.output.dir = base + "/det_a";
    run_case(cfg);
    cfg.output.dir = base + "/det_b";
    run_case(cfg);
    CHECK(slurp(base + "/det_a/diagnostics.csv") == slurp(base + "/det_b/diagnostics.csv"));
    const std::string csv = slurp(base + "/det_a/diagnostics.csv");
    CHECK(csv.rfind("t,E_total,dEdt,dissipation,remainder,surface_fw,Xc_x,Xc_y,Vc_x,Vc_y,area",
                    0) == 0);
  }

  SUBCASE("restart snapshot reproduces the next residual bitwise") {
    CaseConfig cfg;
    cfg.case_name = "random";
    cfg.seed = 3;
    cfg.mesh.counts = {2, 2, 1};
    cfg.mesh.degrees = {3, 3, 1};
    Problem prob = make_problem(cfg);
    DgOperator op(prob.mesh, prob.params);
    OperatorOptions opt = prob.options();
    Field q = prob.q0, dqdt_a(prob.mesh), dqdt_b(prob.mesh);
    Rk3Integrator rk3(op, opt);
    for (int s = 0; s < 3; ++s) rk3.step(q, s * 1e-5, 1e-5);
    fs::create_directories(base);
    const std::string snap = base + "/restart.bin";
    write_restart(snap, q, 3e-5, 3);
    op.eval_residual(q, dqdt_a, opt);

    Field loaded;
    double t = 0;
    int step = 0;
    read_restart(snap, loaded, t, step);
    CHECK(t == 3e-5);
    CHECK(step == 3);
    op.eval_residual(loaded, dqdt_b, opt);
    CHECK(dqdt_a.raw() == dqdt_b.raw());
  }

  fs::remove_all(base);
}
