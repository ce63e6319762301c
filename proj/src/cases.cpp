#include "espdg/cases.hpp"

#include <cmath>

#include "espdg/mms.hpp"
#include "espdg/rng.hpp"

namespace espdg {

namespace {

std::array<BcKind, 6> parse_tags(const MeshSpec &spec) {
  std::array<BcKind, 6> tags;
  for (int s = 0; s < 6; ++s) tags[s] = bc_kind_from_string(spec.tags[s]);
  return tags;
}

// Thin extrusion in z: one element, degree 1, periodic, z-independent data.
void force_thin_z(MeshSpec &spec) {
  spec.counts[2] = 1;
  spec.degrees[2] = 1;
  spec.periodic[2] = true;
  const double hx = (spec.upper.x - spec.lower.x) / spec.counts[0];
  spec.lower.z = 0.0;
  spec.upper.z = hx;
}

void fill_nodal(const Mesh &mesh, Field &q, const std::function<State(const Vec3 &)> &f) {
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int p = 0; p < mesh.nodes_per_element(); ++p) q.set_state(e, p, f(mesh.elems[e].x[p]));
}

}  // namespace

std::function<Vec3(const Vec3 &)> named_mapping(const MeshSpec &spec) {
  if (spec.mapping == "none" || spec.mapping.empty()) return nullptr;
  if (spec.mapping == "sine3d") {
    const Vec3 lo = spec.lower, hi = spec.upper;
    const double amp = spec.map_amplitude;
    return [lo, hi, amp](const Vec3 &x) -> Vec3 {
      const double u = 2.0 * M_PI * (x.x - lo.x) / (hi.x - lo.x);
      const double v = 2.0 * M_PI * (x.y - lo.y) / (hi.y - lo.y);
      const double w = 2.0 * M_PI * (x.z - lo.z) / (hi.z - lo.z);
      const double s = std::sin(u) * std::sin(v) * std::sin(w);
      return {x.x + amp * s, x.y + 0.8 * amp * s, x.z + 0.6 * amp * s};
    };
  }
  throw Error("unknown mesh mapping: " + spec.mapping);
}

Mesh build_mesh(const MeshSpec &spec) {
  Mesh mesh;
  if (spec.type == "file") {
    mesh = read_mesh_file(spec.file, spec.degrees);
  } else {
    mesh = build_cartesian(spec.lower, spec.upper, spec.counts, spec.degrees, spec.periodic,
                           parse_tags(spec));
  }
  if (auto map = named_mapping(spec)) mesh = apply_mapping(mesh, map);
  return mesh;
}

Problem make_problem(const CaseConfig &cfg_in) {
  CaseConfig cfg = cfg_in;
  cfg.validate();
  Problem prob;
  prob.params = cfg.physics;
  prob.mode = cfg.flux_mode == "central" ? FluxMode::central : FluxMode::ers;

  if (cfg.case_name == "manufactured") {
    const double lx = cfg.mesh.upper.x - cfg.mesh.lower.x;
    const double ly = cfg.mesh.upper.y - cfg.mesh.lower.y;
    if (std::abs(lx - ly) > 1e-12 || cfg.mesh.counts[0] != cfg.mesh.counts[1])
      throw Error("manufactured case needs a square domain and mesh");
    cfg.mesh.lower = {-1.0, -1.0, 0.0};
    cfg.mesh.upper = {1.0, 1.0, 0.0};
    cfg.mesh.periodic = {true, true, true};
    force_thin_z(cfg.mesh);
    prob.mesh = build_mesh(cfg.mesh);
    const PhysParams par = prob.params;
    prob.exact = [par](const Vec3 &x, double t) { return mms::exact_state(x, t, par); };
    prob.mms = [par](const Vec3 &x, double t) { return mms::source(x, t, par); };
    prob.q0 = Field(prob.mesh);
    fill_nodal(prob.mesh, prob.q0, [&](const Vec3 &x) { return mms::exact_state(x, 0.0, par); });
  } else if (cfg.case_name == "random") {
    prob.mesh = build_mesh(cfg.mesh);
    prob.q0 = Field(prob.mesh);
    Rng rng(cfg.seed);
    for (int e = 0; e < prob.mesh.n_elements(); ++e)
      for (int p = 0; p < prob.mesh.nodes_per_element(); ++p) {
        const double c = rng.uniform(0.0, 1.0);
        const double u = rng.uniform(-1.0, 1.0);
        const double v = rng.uniform(-1.0, 1.0);
        const double w = rng.uniform(-1.0, 1.0);
        const double pr = rng.uniform(-1.0, 1.0);
        const double sr = std::sqrt(density(c, prob.params));
        prob.q0.set_state(e, p, {c, sr * u, sr * v, sr * w, pr});
      }
  } else if (cfg.case_name == "static_bubble") {
    cfg.mesh.lower = {0.0, 0.0, 0.0};
    cfg.mesh.upper = {1.0, 1.0, 0.0};
    cfg.mesh.periodic = {true, true, true};
    force_thin_z(cfg.mesh);
    prob.mesh = build_mesh(cfg.mesh);
    prob.q0 = Field(prob.mesh);
    const double zeta = 2.5e-3;
    fill_nodal(prob.mesh, prob.q0, [&](const Vec3 &x) -> State {
      const double r = std::hypot(x.x - 0.5, x.y - 0.5);
      const double c = 0.5 * (1.0 - std::tanh(-(r - 0.25) / zeta));
      return {c, 0.0, 0.0, 0.0, 0.0};
    });
    prob.track_bubble = true;
  } else if (cfg.case_name == "rising_bubble") {
    cfg.mesh.lower = {0.0, 0.0, 0.0};
    cfg.mesh.upper = {1.0, 2.0, 0.0};
    cfg.mesh.periodic = {false, false, true};
    cfg.mesh.tags = {"free_slip", "free_slip", "no_slip", "no_slip", "free_slip", "free_slip"};
    force_thin_z(cfg.mesh);
    prob.mesh = build_mesh(cfg.mesh);
    prob.q0 = Field(prob.mesh);
    const double eps = prob.params.eps;
    fill_nodal(prob.mesh, prob.q0, [&](const Vec3 &x) -> State {
      const double r = std::hypot(x.x - 0.5, x.y - 0.5);
      const double c = 1.0 - 0.5 * (std::tanh(-2.0 * (r - 0.25) / eps) + 1.0);
      return {c, 0.0, 0.0, 0.0, 0.0};
    });
    prob.track_bubble = true;
  } else if (cfg.case_name == "duct") {
    // Straight duct with prescribed inflow and zero-pressure outflow ghosts,
    // flow along +z, stratified inlet concentration.
    cfg.mesh.tags = {"free_slip", "free_slip", "free_slip",
                     "free_slip", "inflow",    "outflow"};
    cfg.mesh.periodic = {false, false, false};
    prob.mesh = build_mesh(cfg.mesh);
    const PhysParams par = prob.params;
    const double eps = par.eps;
    const Vec3 lo = cfg.mesh.lower, hi = cfg.mesh.upper;
    const double v1 = 2.0, v2 = 0.2, x0 = -0.1;
    prob.inflow = [=](const Vec3 &x, double) -> InflowData {
      const double xc = (x.x - 0.5 * (lo.x + hi.x)) / (hi.x - lo.x);   // in [-1/2, 1/2]
      const double yc = (x.y - 0.5 * (lo.y + hi.y)) / (hi.y - lo.y);
      const double c =
          0.5 + 0.5 * std::tanh((xc - x0) / eps + 0.1 * std::sin(10.0 * x.z) +
                                0.1 * std::sin(20.0 * x.y));
      const double shape = (1.0 - 4.0 * xc * xc) * (1.0 - 4.0 * yc * yc);
      const double w = (v1 * c + v2 * (1.0 - c)) * shape;
      return {c, {0.0, 0.0, w}};
    };
    prob.q0 = Field(prob.mesh);
    fill_nodal(prob.mesh, prob.q0, [&](const Vec3 &x) -> State {
      const InflowData d = prob.inflow(x, 0.0);
      const double sr = std::sqrt(density(d.c, par));
      return {d.c, sr * d.u.x, sr * d.u.y, sr * d.u.z, 0.0};
    });
  } else {
    throw Error("unknown case: " + cfg.case_name);
  }

  prob.cfg = cfg;
  return prob;
}

}  // namespace espdg
