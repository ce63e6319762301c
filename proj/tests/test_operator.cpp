#include <cmath>

#include "doctest.h"
#include "espdg/cases.hpp"
#include "espdg/diagnostics.hpp"
#include "espdg/mms.hpp"
#include "espdg/operator.hpp"
#include "espdg/reference.hpp"
#include "espdg/rng.hpp"

using namespace espdg;

namespace {

PhysParams sample_params() {
  PhysParams p;
  p.rho1 = 1000.0;
  p.rho2 = 1.0;
  p.eta1 = 1e-3;
  p.eta2 = 1e-4;
  p.sigma = 1.0;
  p.eps = 0.75;
  p.t_ch = 10.0;
  p.c0_sqr = 100.0;
  return p;
}

Mesh periodic_box(int m, int n) {
  std::array<BcKind, 6> tags;
  tags.fill(BcKind::free_slip);
  return build_cartesian({0, 0, 0}, {1, 1, 1}, {m, m, m}, {n, n, n}, {true, true, true}, tags);
}

Mesh curved_box(int m, int n) {
  return apply_mapping(periodic_box(m, n), [](const Vec3 &x) -> Vec3 {
    const double s =
        0.06 * std::sin(2 * M_PI * x.x) * std::sin(2 * M_PI * x.y) * std::sin(2 * M_PI * x.z);
    return {x.x + s, x.y + 0.8 * s, x.z + 0.6 * s};
  });
}

void fill_random(Field &q, const Mesh &mesh, const PhysParams &par, uint64_t seed) {
  Rng rng(seed);
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int p = 0; p < mesh.nodes_per_element(); ++p) {
      const double c = rng.uniform(0, 1);
      const double sr = std::sqrt(density(c, par));
      q.set_state(e, p, {c, sr * rng.uniform(-1, 1), sr * rng.uniform(-1, 1),
                         sr * rng.uniform(-1, 1), rng.uniform(-1, 1)});
    }
}

}  // namespace

TEST_CASE("free-stream preservation") {
  // O(1) state and parameters: the defect is pure round-off.
  PhysParams par;
  par.rho1 = 2.0;
  par.rho2 = 1.0;
  par.eta1 = par.eta2 = 1e-3;
  par.sigma = 1.0;
  par.eps = 0.3;
  par.t_ch = 10.0;
  par.c0_sqr = 1.0;
  for (bool curved : {false, true}) {
    Mesh mesh = curved ? curved_box(3, 4) : periodic_box(3, 4);
    DgOperator op(mesh, par);
    Field q(mesh), dqdt(mesh);
    const double c0 = 0.37;
    const double sr = std::sqrt(density(c0, par));
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p)
        q.set_state(e, p, {c0, sr * 0.4, sr * (-0.3), sr * 0.9, 1.7});
    for (FluxMode mode : {FluxMode::central, FluxMode::ers}) {
      OperatorOptions opt;
      opt.mode = mode;
      op.eval_residual(q, dqdt, opt);
      CHECK(max_norm(dqdt) <= 1e-10);
    }
  }
  // Extreme parameter magnitudes (rho ratio 1000, rho0 c0^2 = 1e5) scale the
  // round-off floor with the flux magnitudes.
  {
    const PhysParams big = sample_params();
    Mesh mesh = curved_box(3, 4);
    DgOperator op(mesh, big);
    Field q(mesh), dqdt(mesh);
    const double sr = std::sqrt(density(0.37, big));
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p)
        q.set_state(e, p, {0.37, sr * 0.4, sr * (-0.3), sr * 0.9, 1.7});
    OperatorOptions opt;
    op.eval_residual(q, dqdt, opt);
    CHECK(max_norm(dqdt) <= 1e-7);
  }
}

TEST_CASE("concentration gradient") {
  const PhysParams par = sample_params();
  SUBCASE("constant field has zero gradient") {
    Mesh mesh = curved_box(2, 3);
    DgOperator op(mesh, par);
    Field q(mesh);
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p) q.set_state(e, p, {0.6, 0, 0, 0, 0});
    OperatorOptions opt;
    op.compute_concentration_gradient(q, opt);
    for (const Vec3 &g : op.gc()) CHECK(norm(g) <= 1e-12);
  }
  SUBCASE("linear field on a wall-bounded affine mesh is exact everywhere") {
    std::array<BcKind, 6> tags;
    tags.fill(BcKind::free_slip);
    Mesh mesh = build_cartesian({0, 0, 0}, {1, 1, 1}, {3, 3, 1}, {3, 3, 1},
                                {false, false, true}, tags);
    DgOperator op(mesh, par);
    Field q(mesh);
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p)
        q.set_state(e, p, {mesh.elems[e].x[p].x, 0, 0, 0, 0});
    OperatorOptions opt;
    op.compute_concentration_gradient(q, opt);
    for (const Vec3 &g : op.gc()) {
      CHECK(std::abs(g.x - 1.0) <= 1e-12);
      CHECK(std::abs(g.y) <= 1e-12);
      CHECK(std::abs(g.z) <= 1e-12);
    }
  }
  SUBCASE("quadratic field on a single element matches the analytic gradient") {
    std::array<BcKind, 6> tags;
    tags.fill(BcKind::free_slip);
    Mesh mesh =
        build_cartesian({-1, -1, -1}, {1, 1, 1}, {1, 1, 1}, {4, 4, 4}, {false, false, false},
                        tags);
    DgOperator op(mesh, par);
    Field q(mesh);
    for (int p = 0; p < mesh.nodes_per_element(); ++p)
      q.set_state(0, p, {mesh.elems[0].x[p].x * mesh.elems[0].x[p].x, 0, 0, 0, 0});
    OperatorOptions opt;
    op.compute_concentration_gradient(q, opt);
    for (int p = 0; p < mesh.nodes_per_element(); ++p)
      CHECK(std::abs(op.gc()[p].x - 2.0 * mesh.elems[0].x[p].x) <= 1e-12);
  }
}

TEST_CASE("chemical potential") {
  const PhysParams par = sample_params();
  SUBCASE("uniform concentration gives mu = f0'(c)") {
    Mesh mesh = curved_box(2, 3);
    DgOperator op(mesh, par);
    Field q(mesh);
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p) q.set_state(e, p, {1.0, 0, 0, 0, 0});
    OperatorOptions opt;
    op.compute_concentration_gradient(q, opt);
    op.compute_chemical_potential(q, opt);
    for (double m : op.mu()) CHECK(std::abs(m - 0.0) <= 1e-11);

    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p) q.set_state(e, p, {0.3, 0, 0, 0, 0});
    op.compute_concentration_gradient(q, opt);
    op.compute_chemical_potential(q, opt);
    const double expected = chemical_free_energy_prime(0.3, par);
    for (double m : op.mu())
      CHECK(std::abs(m - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
  }
  SUBCASE("sine concentration converges spectrally in p") {
    // c = 0.5 + 0.25 sin(pi x), periodic: mu = f0'(c) + (3/2) sigma eps pi^2 (c - 0.5)
    auto run = [&](int n) {
      std::array<BcKind, 6> tags;
      tags.fill(BcKind::free_slip);
      Mesh mesh = build_cartesian({-1, -1, -1}, {1, 1, 1}, {4, 1, 1}, {n, 1, 1},
                                  {true, true, true}, tags);
      DgOperator op(mesh, par);
      Field q(mesh);
      for (int e = 0; e < mesh.n_elements(); ++e)
        for (int p = 0; p < mesh.nodes_per_element(); ++p)
          q.set_state(e, p, {0.5 + 0.25 * std::sin(M_PI * mesh.elems[e].x[p].x), 0, 0, 0, 0});
      OperatorOptions opt;
      op.compute_concentration_gradient(q, opt);
      op.compute_chemical_potential(q, opt);
      double err = 0.0;
      for (int e = 0; e < mesh.n_elements(); ++e)
        for (int p = 0; p < mesh.nodes_per_element(); ++p) {
          const double c = q.at(e, p)[0];
          const double exact = chemical_free_energy_prime(c, par) +
                               1.5 * par.sigma * par.eps * M_PI * M_PI * (c - 0.5);
          err = std::max(err, std::abs(op.mu()[op.dof(e, p)] - exact));
        }
      return err;
    };
    const double e4 = run(4), e8 = run(8);
    CHECK(e8 <= 1e-4 * e4);  // spectral drop
    CHECK(e8 <= 1e-5);
  }
}

TEST_CASE("entropy gradients") {
  const PhysParams par = sample_params();
  SUBCASE("uniform state has zero gradients") {
    Mesh mesh = curved_box(2, 3);
    DgOperator op(mesh, par);
    Field q(mesh), dqdt(mesh);
    const double sr = std::sqrt(density(0.5, par));
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p)
        q.set_state(e, p, {0.5, sr * 0.2, sr * 0.1, 0, 1.0});
    OperatorOptions opt;
    op.eval_residual(q, dqdt, opt);
    for (const auto &g : op.grad_w())
      for (int d = 0; d < 3; ++d)
        for (int m = 0; m < 5; ++m) CHECK(std::abs(g[d][m]) <= 1e-11);
  }
  SUBCASE("linear velocity on an affine mesh is exact in the interior") {
    std::array<BcKind, 6> tags;
    tags.fill(BcKind::no_slip);
    Mesh mesh = build_cartesian({0, 0, 0}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1},
                                {false, false, true}, tags);
    PhysParams unit = par;
    unit.rho1 = unit.rho2 = 1.0;  // rho = 1 so sqrt(rho) u = u
    DgOperator op(mesh, unit);
    Field q(mesh);
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int p = 0; p < mesh.nodes_per_element(); ++p) {
        const Vec3 &x = mesh.elems[e].x[p];
        q.set_state(e, p, {0.5, 2.0 * x.y, 0.0, 0.0, 0.0});
      }
    OperatorOptions opt;
    op.compute_concentration_gradient(q, opt);
    op.compute_chemical_potential(q, opt);
    op.compute_entropy_gradients(q, opt);
    // check du/dy = 2 strictly inside elements (walls alter face nodes)
    const auto n = mesh.counts();
    for (int e = 0; e < mesh.n_elements(); ++e)
      for (int k = 0; k < n[2]; ++k)
        for (int j = 1; j + 1 < n[1]; ++j)
          for (int i = 1; i + 1 < n[0]; ++i) {
            const auto &g = op.grad_w()[op.dof(e, mesh.node_index(i, j, k))];
            CHECK(std::abs(g[1][1] - 2.0) <= 1e-11);
            CHECK(std::abs(g[0][1]) <= 1e-11);
          }
  }
}

TEST_CASE("residual matches the manufactured rate") {
  CaseConfig cfg;
  cfg.case_name = "manufactured";
  cfg.physics.rho1 = 1.0;
  cfg.physics.rho2 = 2.0;
  cfg.physics.eta1 = 1e-3;
  cfg.physics.eta2 = 1e-3;
  cfg.physics.eps = 1.0 / std::sqrt(2.0);
  cfg.physics.t_ch = 1e3;
  cfg.physics.c0_sqr = 1e3;
  cfg.physics.sigma = 6.236e-3;
  cfg.mesh.counts = {4, 4, 1};

  auto error_at = [&](int n) {
    CaseConfig c2 = cfg;
    c2.mesh.degrees = {n, n, 1};
    Problem prob = make_problem(c2);
    DgOperator op(prob.mesh, prob.params);
    Field q(prob.mesh), dqdt(prob.mesh);
    const double t = 0.8;
    for (int e = 0; e < prob.mesh.n_elements(); ++e)
      for (int p = 0; p < prob.mesh.nodes_per_element(); ++p)
        q.set_state(e, p, mms::exact_state(prob.mesh.elems[e].x[p], t, prob.params));
    OperatorOptions opt = prob.options(t);
    op.eval_residual(q, dqdt, opt);
    double err = 0.0;
    for (int e = 0; e < prob.mesh.n_elements(); ++e)
      for (int p = 0; p < prob.mesh.nodes_per_element(); ++p) {
        const State rate = mms::exact_rate(prob.mesh.elems[e].x[p], t, prob.params);
        for (int m = 0; m < 5; ++m) err = std::max(err, std::abs(dqdt.at(e, p)[m] - rate[m]));
      }
    return err;
  };
  const double e5 = error_at(5);
  const double e8 = error_at(8);
  CHECK(e8 < 1e-2 * e5);  // spectral decay of the spatial defect
  CHECK(e8 < 2e-3);
}

TEST_CASE("parallel kernels match the serial reference") {
  const PhysParams par = sample_params();
  SUBCASE("periodic curved mesh, both flux modes") {
    Mesh mesh = curved_box(2, 3);
    DgOperator op(mesh, par);
    Field q(mesh), a(mesh), b(mesh);
    fill_random(q, mesh, par, 99);
    for (FluxMode mode : {FluxMode::central, FluxMode::ers}) {
      OperatorOptions opt;
      opt.mode = mode;
      opt.kappa_beta = 1.0;
      op.eval_residual(q, a, opt);
      reference::eval_residual_serial(mesh, par, q, b, opt);
      double scale = 1.0, diff = 0.0;
      for (size_t i = 0; i < a.raw().size(); ++i) {
        diff = std::max(diff, std::abs(a.raw()[i] - b.raw()[i]));
        scale = std::max(scale, std::abs(b.raw()[i]));
      }
      CHECK(diff <= 1e-12 * scale);
    }
  }
  SUBCASE("wall-bounded box with contact angle") {
    std::array<BcKind, 6> tags{BcKind::free_slip, BcKind::free_slip, BcKind::no_slip,
                               BcKind::no_slip,   BcKind::free_slip, BcKind::free_slip};
    Mesh mesh = build_cartesian({0, 0, 0}, {1, 1, 0.5}, {3, 3, 1}, {3, 3, 1},
                                {false, false, true}, tags);
    PhysParams p2 = par;
    p2.theta_w = M_PI / 4.0;
    DgOperator op(mesh, p2);
    Field q(mesh), a(mesh), b(mesh);
    fill_random(q, mesh, p2, 7);
    OperatorOptions opt;
    opt.mode = FluxMode::ers;
    opt.kappa_beta = 1.0;
    op.eval_residual(q, a, opt);
    reference::eval_residual_serial(mesh, p2, q, b, opt);
    double scale = 1.0, diff = 0.0;
    for (size_t i = 0; i < a.raw().size(); ++i) {
      diff = std::max(diff, std::abs(a.raw()[i] - b.raw()[i]));
      scale = std::max(scale, std::abs(b.raw()[i]));
    }
    CHECK(diff <= 1e-12 * scale);
  }
  SUBCASE("duct with inflow and outflow ghosts") {
    CaseConfig cfg;
    cfg.case_name = "duct";
    cfg.physics = sample_params();
    cfg.physics.kappa_beta = 1.0;
    cfg.mesh.lower = {-0.5, -0.5, 0.0};
    cfg.mesh.upper = {0.5, 0.5, 2.0};
    cfg.mesh.counts = {2, 2, 3};
    cfg.mesh.degrees = {2, 2, 2};
    Problem prob = make_problem(cfg);
    DgOperator op(prob.mesh, prob.params);
    Field a(prob.mesh), b(prob.mesh);
    OperatorOptions opt = prob.options(0.0);
    op.eval_residual(prob.q0, a, opt);
    reference::eval_residual_serial(prob.mesh, prob.params, prob.q0, b, opt);
    double scale = 1.0, diff = 0.0;
    for (size_t i = 0; i < a.raw().size(); ++i) {
      diff = std::max(diff, std::abs(a.raw()[i] - b.raw()[i]));
      scale = std::max(scale, std::abs(b.raw()[i]));
    }
    CHECK(diff <= 1e-12 * scale);
  }
}

TEST_CASE("residual evaluation is deterministic") {
  const PhysParams par = sample_params();
  Mesh mesh = curved_box(2, 3);
  DgOperator op(mesh, par);
  Field q(mesh), a(mesh), b(mesh);
  fill_random(q, mesh, par, 4);
  OperatorOptions opt;
  op.eval_residual(q, a, opt);
  op.eval_residual(q, b, opt);
  CHECK(a.raw() == b.raw());
}

TEST_CASE("non-finite states are reported with the element id") {
  const PhysParams par = sample_params();
  Mesh mesh = periodic_box(2, 2);
  DgOperator op(mesh, par);
  Field q(mesh), dqdt(mesh);
  fill_random(q, mesh, par, 5);
  q.at(3, 0)[4] = std::nan("");
  OperatorOptions opt;
  CHECK_THROWS_WITH_AS(op.eval_residual(q, dqdt, opt), doctest::Contains("element"), Error);
}
