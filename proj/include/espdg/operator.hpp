#pragma once

#include <functional>
#include <vector>

#include "espdg/field.hpp"
#include "espdg/fluxes.hpp"
#include "espdg/mesh.hpp"
#include "espdg/physics.hpp"

namespace espdg {

/// Manufactured-solution source, evaluated at quadrature nodes.
using MmsSource = std::function<State(const Vec3 &, double)>;
/// Prescribed inflow state at boundary face nodes.
using InflowProfile = std::function<InflowData(const Vec3 &, double)>;

struct OperatorOptions {
  FluxMode mode = FluxMode::ers;
  double kappa_beta = 0.0;
  double time = 0.0;
  const MmsSource *mms = nullptr;
  const InflowProfile *inflow = nullptr;
};

/// Per-face work buffers. The `_l`/`_r` arrays hold the two traces in the
/// left side's face parameterization; on physical boundaries `_r` holds the
/// ghost values. All normal components are along the left outward normal.
struct FaceWork {
  std::vector<Vec3> xf;                      // face node positions
  std::vector<double> c_l, c_r, ct_l, ct_r;  // concentration and its residual
  std::vector<double> mu_l, mu_r;
  std::vector<double> gcn_l, gcn_r;          // G_c . n
  std::vector<double> cstar, gcn_star, ctstar;
  std::vector<State> q_l, q_r;               // physical states
  std::vector<State> w_l, w_r, wstar;
  std::vector<State> fvn_l, fvn_r, fvn_star;
  std::vector<State> inv_l, inv_r;  // inviscid surface defect per side, physical frame
};

/// Semi-discrete DG operator: point-wise tensor-product kernels over
/// Gauss-Lobatto nodes with SBP surface corrections. Element and face loops
/// are OpenMP-parallel; all writes are disjoint, so results do not depend on
/// the thread count.
class DgOperator {
 public:
  DgOperator(const Mesh &mesh, const PhysParams &params);

  const Mesh &mesh() const { return *mesh_; }
  const PhysParams &params() const { return params_; }
  int n_dofs() const { return nelem_ * npe_; }
  int dof(int e, int q) const { return e * npe_ + q; }

  /// Full residual dq/dt. Fills the companion-field caches (mu, G_c, W, G)
  /// and the face buffers as a side effect.
  void eval_residual(const Field &q, Field &dqdt, const OperatorOptions &opt);

  // Staged kernels, in the order the residual uses them.
  void compute_concentration_gradient(const Field &q, const OperatorOptions &opt);
  void compute_chemical_potential(const Field &q, const OperatorOptions &opt);
  void compute_entropy_gradients(const Field &q, const OperatorOptions &opt);

  const std::vector<double> &mu() const { return mu_; }
  const std::vector<Vec3> &gc() const { return gc_; }
  const std::vector<State> &w() const { return w_; }
  /// grad_w()[dof][d][m] = d w_m / d x_d (physical gradient).
  const std::vector<std::array<State, 3>> &grad_w() const { return g_; }
  const std::vector<FaceWork> &face_work() const { return fw_; }

  /// Gathers residual concentration traces (and their BR1 stars) into the
  /// face buffers for entropy bookkeeping.
  void gather_concentration_rate(const Field &dqdt);

  /// Homogeneous composed Cahn-Hilliard operator: y = B x with
  /// B x = div(M0 grad(-(3/2) sigma eps lap_br1 x)) point-wise, the linear
  /// part of the chemical-potential route with homogeneous boundary data.
  /// Clobbers the caches of the staged kernels.
  void apply_ch_biharmonic(const std::vector<double> &x, std::vector<double> &y,
                           double kappa_beta);

  /// Quadrature mass J*w per scalar dof.
  const std::vector<double> &dof_mass() const { return jw_; }

 private:
  const Mesh *mesh_;
  PhysParams params_;
  int nelem_ = 0, npe_ = 0;
  int n1_ = 0, n2_ = 0, n3_ = 0;

  std::vector<double> mu_;
  std::vector<Vec3> gc_;
  std::vector<State> w_;
  std::vector<std::array<State, 3>> g_;        // physical grad of entropy vars
  std::vector<std::array<State, 3>> gw_xi_;    // reference-space grad of entropy vars
  std::vector<double> jw_;
  std::vector<FaceWork> fw_;

  // scratch for the biharmonic passes
  std::vector<Vec3> bh_grad_;
  std::vector<double> bh_mu_;
  std::vector<std::vector<double>> bh_xl_, bh_xr_, bh_hnl_, bh_hnr_, bh_star_;
};

}  // namespace espdg
