#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "espdg/operator.hpp"

namespace espdg {

/// Compensated (Neumaier) accumulator; global reductions run in a fixed
/// element/face order so results are reproducible.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double get() const { return s + c; }
};

/// Per-step entropy bookkeeping. dedt is the spatial (semi-discrete)
/// derivative of the total entropy plus surface free energy; the remainder
/// is dedt plus the physical dissipation integral, zero for central fluxes
/// and non-positive for the exact Riemann solver.
struct EntropyReport {
  double t = 0.0;
  double e_total = 0.0;      // extended entropy (includes the beta jump term)
  double dedt = 0.0;
  double dissipation = 0.0;
  double remainder = 0.0;
  double surface_fw = 0.0;
};

struct BubbleObservables {
  Vec3 xc{}, vc{};
  double area = 0.0;
};

/// Total extended entropy; runs the concentration-gradient pass on `op`.
double total_entropy(DgOperator &op, const Field &q, const OperatorOptions &opt);

/// Entropy report from a field and its freshly computed residual. Assumes
/// op.eval_residual(q, dqdt, opt) has just run so the operator caches match.
EntropyReport entropy_report(DgOperator &op, const Field &q, const Field &dqdt,
                             const OperatorOptions &opt, double t);

/// Quadrature-weighted first moments of (1 - C).
BubbleObservables bubble_observables(const Mesh &mesh, const Field &q, const PhysParams &par);

/// Discrete L2 errors per state variable against a nodal-exact callable.
std::array<double, 5> l2_error(const Mesh &mesh, const Field &q,
                               const std::function<State(const Vec3 &, double)> &exact, double t);

/// Global L2 norm of the velocity magnitude.
double velocity_norm(const Mesh &mesh, const Field &q, const PhysParams &par);

/// Max norm of a field (all variables).
double max_norm(const Field &f);

/// Nodal static pressure p_s = p - (F - mu c); requires fresh operator caches.
std::vector<double> static_pressure_field(const DgOperator &op, const Field &q);

/// Barycentric point probe of a nodal scalar. The containing element is
/// found by inverting the trilinear corner map, so the mesh must carry its
/// corner representation (no analytic mappings).
double probe_nodal_scalar(const Mesh &mesh, const std::vector<double> &nodal, const Vec3 &point);

}  // namespace espdg
