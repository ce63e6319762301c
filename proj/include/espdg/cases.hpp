#pragma once

#include "espdg/config.hpp"
#include "espdg/field.hpp"
#include "espdg/mesh.hpp"
#include "espdg/operator.hpp"

namespace espdg {

/// A fully initialized problem: mesh, parameters, initial data, and the
/// case-specific callables wired into the operator options.
struct Problem {
  CaseConfig cfg;
  Mesh mesh;
  PhysParams params;
  Field q0;
  FluxMode mode = FluxMode::ers;
  MmsSource mms;        // manufactured case only
  InflowProfile inflow; // duct case only
  std::function<State(const Vec3 &, double)> exact;  // manufactured case only
  bool track_bubble = false;

  OperatorOptions options(double t = 0.0) const {
    OperatorOptions opt;
    opt.mode = mode;
    opt.kappa_beta = params.kappa_beta;
    opt.time = t;
    opt.mms = mms ? &mms : nullptr;
    opt.inflow = inflow ? &inflow : nullptr;
    return opt;
  }
};

Problem make_problem(const CaseConfig &cfg);

/// Mesh construction from a spec (shared by cases and tools).
Mesh build_mesh(const MeshSpec &spec);

/// Named analytic mesh mappings ("sine3d").
std::function<Vec3(const Vec3 &)> named_mapping(const MeshSpec &spec);

}  // namespace espdg
