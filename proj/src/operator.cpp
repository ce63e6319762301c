#include "espdg/operator.hpp"

#include <omp.h>

#include <cmath>

namespace espdg {

namespace {

enum ScalarGhost { ghost_conc_full, ghost_conc_lin, ghost_copy };
enum NormalGhost { ghost_n_wall_full, ghost_n_lin, ghost_n_copy };

bool is_wall(BcKind k) { return k == BcKind::free_slip || k == BcKind::no_slip; }

// OpenMP swallows exceptions; capture the first one and rethrow outside.
template <typename Body>
void parallel_for_throwing(int n, Body &&body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(espdg_parallel_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

DgOperator::DgOperator(const Mesh &mesh, const PhysParams &params)
    : mesh_(&mesh), params_(params) {
  params_.validate();
  nelem_ = mesh.n_elements();
  npe_ = mesh.nodes_per_element();
  n1_ = mesh.bases[0]->count();
  n2_ = mesh.bases[1]->count();
  n3_ = mesh.bases[2]->count();

  const size_t n = static_cast<size_t>(nelem_) * npe_;
  mu_.assign(n, 0.0);
  gc_.assign(n, Vec3{});
  w_.assign(n, State{});
  g_.assign(n, {});
  gw_xi_.assign(n, {});

  jw_.assign(n, 0.0);
  for (int e = 0; e < nelem_; ++e) {
    int q = 0;
    for (int k = 0; k < n3_; ++k)
      for (int j = 0; j < n2_; ++j)
        for (int i = 0; i < n1_; ++i, ++q) {
          const double wq = mesh.bases[0]->weight(i) * mesh.bases[1]->weight(j) *
                            mesh.bases[2]->weight(k);
          jw_[dof(e, q)] = wq * mesh.elems[e].jac[q];
        }
  }

  fw_.resize(mesh.faces.size());
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    FaceWork &w = fw_[f];
    w.xf.resize(nfp);
    for (int k = 0; k < nfp; ++k) w.xf[k] = mesh.elems[face.left].x[face.idx_l[k]];
    w.c_l.resize(nfp);
    w.c_r.resize(nfp);
    w.ct_l.resize(nfp);
    w.ct_r.resize(nfp);
    w.mu_l.resize(nfp);
    w.mu_r.resize(nfp);
    w.gcn_l.resize(nfp);
    w.gcn_r.resize(nfp);
    w.cstar.resize(nfp);
    w.gcn_star.resize(nfp);
    w.ctstar.resize(nfp);
    w.q_l.resize(nfp);
    w.q_r.resize(nfp);
    w.w_l.resize(nfp);
    w.w_r.resize(nfp);
    w.wstar.resize(nfp);
    w.fvn_l.resize(nfp);
    w.fvn_r.resize(nfp);
    w.fvn_star.resize(nfp);
    w.inv_l.resize(nfp);
    w.inv_r.resize(nfp);
  }
}

// ---------------------------------------------------------------------------
// scalar trace machinery (shared by the concentration pass and the implicit
// Cahn-Hilliard operator)

namespace {

// Fills the two scalar traces of face f, synthesizing the ghost side on
// physical boundaries.
void gather_scalar_face(const Mesh &mesh, const std::vector<double> &x, int fid,
                        std::vector<double> &xl, std::vector<double> &xr, int mode,
                        const OperatorOptions &opt, int npe, const std::vector<Vec3> &xf) {
  const Face &face = mesh.faces[fid];
  const int nfp = face.nfp();
  const int base_l = face.left * npe;
  for (int k = 0; k < nfp; ++k) xl[k] = x[base_l + face.idx_l[k]];
  if (face.right >= 0) {
    const int base_r = face.right * npe;
    for (int k = 0; k < nfp; ++k) xr[k] = x[base_r + face.idx_r[k]];
    return;
  }
  switch (face.kind) {
    case BcKind::free_slip:
    case BcKind::no_slip:
    case BcKind::outflow:
      for (int k = 0; k < nfp; ++k) xr[k] = xl[k];
      break;
    case BcKind::inflow:
      if (mode == ghost_conc_full) {
        if (!opt.inflow) throw Error("inflow face without inflow profile");
        for (int k = 0; k < nfp; ++k) xr[k] = (*opt.inflow)(xf[k], opt.time).c;
      } else if (mode == ghost_conc_lin) {
        for (int k = 0; k < nfp; ++k) xr[k] = 0.0;
      } else {
        for (int k = 0; k < nfp; ++k) xr[k] = xl[k];
      }
      break;
    default:
      throw Error("gather_scalar_face: unexpected face kind");
  }
}

// Normal traces of a nodal vector field, with the ghost rules of the
// Cahn-Hilliard Neumann closures.
void gather_normal_face(const Mesh &mesh, const std::vector<Vec3> &g, int fid,
                        const std::vector<double> &cl, std::vector<double> &gnl,
                        std::vector<double> &gnr, int mode, const PhysParams &par, int npe) {
  const Face &face = mesh.faces[fid];
  const int nfp = face.nfp();
  const int base_l = face.left * npe;
  for (int k = 0; k < nfp; ++k) gnl[k] = dot(g[base_l + face.idx_l[k]], face.normal[k]);
  if (face.right >= 0) {
    const int base_r = face.right * npe;
    for (int k = 0; k < nfp; ++k) gnr[k] = dot(g[base_r + face.idx_r[k]], face.normal[k]);
    return;
  }
  if (is_wall(face.kind)) {
    if (mode == ghost_n_wall_full) {
      const double s = -4.0 / (3.0 * par.sigma * par.eps);
      for (int k = 0; k < nfp; ++k) gnr[k] = s * wall_free_energy_prime(cl[k], par) - gnl[k];
    } else {
      for (int k = 0; k < nfp; ++k) gnr[k] = -gnl[k];
    }
  } else {  // inflow/outflow: copy the interior trace
    for (int k = 0; k < nfp; ++k) gnr[k] = gnl[k];
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// stage 1a: concentration gradient

void DgOperator::compute_concentration_gradient(const Field &q, const OperatorOptions &opt) {
  const Mesh &mesh = *mesh_;
  const int nface = static_cast<int>(mesh.faces.size());

  parallel_for_throwing(nface, [&](int f) {
    FaceWork &w = fw_[f];
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    // concentration traces from the state (row 0)
    for (int k = 0; k < nfp; ++k) w.c_l[k] = q.at(face.left, face.idx_l[k])[0];
    if (face.right >= 0) {
      for (int k = 0; k < nfp; ++k) w.c_r[k] = q.at(face.right, face.idx_r[k])[0];
    } else if (face.kind == BcKind::inflow) {
      if (!opt.inflow) throw Error("inflow face without inflow profile");
      for (int k = 0; k < nfp; ++k) w.c_r[k] = (*opt.inflow)(w.xf[k], opt.time).c;
    } else {
      for (int k = 0; k < nfp; ++k) w.c_r[k] = w.c_l[k];
    }
    for (int k = 0; k < nfp; ++k) w.cstar[k] = 0.5 * (w.c_l[k] + w.c_r[k]);
  });

#pragma omp parallel for schedule(static)
  for (int e = 0; e < nelem_; ++e) {
    const auto &geom = mesh.elems[e];
    const double *d1 = mesh.bases[0]->d_matrix().data();
    const double *d2 = mesh.bases[1]->d_matrix().data();
    const double *d3 = mesh.bases[2]->d_matrix().data();
    auto cval = [&](int i, int j, int k) { return q.at(e, mesh.node_index(i, j, k))[0]; };

    for (int k = 0; k < n3_; ++k)
      for (int j = 0; j < n2_; ++j)
        for (int i = 0; i < n1_; ++i) {
          double dx1 = 0.0, dx2 = 0.0, dx3 = 0.0;
          for (int m = 0; m < n1_; ++m) dx1 += d1[i * n1_ + m] * cval(m, j, k);
          for (int m = 0; m < n2_; ++m) dx2 += d2[j * n2_ + m] * cval(i, m, k);
          for (int m = 0; m < n3_; ++m) dx3 += d3[k * n3_ + m] * cval(i, j, m);
          const int qn = mesh.node_index(i, j, k);
          gc_[dof(e, qn)] =
              dx1 * geom.ja[qn][0] + dx2 * geom.ja[qn][1] + dx3 * geom.ja[qn][2];
        }

    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const FaceWork &w = fw_[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      const int nfp = face.nfp();
      for (int k = 0; k < nfp; ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        const double cside = (pos == 0) ? w.c_l[k] : w.c_r[k];
        const double coeff = (w.cstar[k] - cside) * face.jf[k] * invw * outsign;
        gc_[dof(e, qn)] += coeff * face.normal[k];
      }
    }

    for (int qn = 0; qn < npe_; ++qn) {
      const double inv_j = 1.0 / geom.jac[qn];
      gc_[dof(e, qn)] = inv_j * gc_[dof(e, qn)];
    }
  }
}

// ---------------------------------------------------------------------------
// stage 1b: chemical potential

void DgOperator::compute_chemical_potential(const Field &q, const OperatorOptions &opt) {
  const Mesh &mesh = *mesh_;
  const int nface = static_cast<int>(mesh.faces.size());

#pragma omp parallel for schedule(static)
  for (int f = 0; f < nface; ++f) {
    FaceWork &w = fw_[f];
    const Face &face = mesh.faces[f];
    gather_normal_face(mesh, gc_, f, w.c_l, w.gcn_l, w.gcn_r, ghost_n_wall_full, params_, npe_);
    const int nfp = face.nfp();
    for (int k = 0; k < nfp; ++k) {
      const double beta = opt.kappa_beta * face.beta_geom[k];
      w.gcn_star[k] = 0.5 * (w.gcn_l[k] + w.gcn_r[k]) + beta * (w.c_r[k] - w.c_l[k]);
    }
  }

  const double coef = 1.5 * params_.sigma * params_.eps;

#pragma omp parallel for schedule(static)
  for (int e = 0; e < nelem_; ++e) {
    const auto &geom = mesh.elems[e];
    const double *dh1 = mesh.bases[0]->dhat_matrix().data();
    const double *dh2 = mesh.bases[1]->dhat_matrix().data();
    const double *dh3 = mesh.bases[2]->dhat_matrix().data();
    auto gct = [&](int i, int j, int k, int dir) {
      const int qn = mesh.node_index(i, j, k);
      return dot(geom.ja[qn][dir], gc_[dof(e, qn)]);
    };

    for (int k = 0; k < n3_; ++k)
      for (int j = 0; j < n2_; ++j)
        for (int i = 0; i < n1_; ++i) {
          double div = 0.0;
          for (int m = 0; m < n1_; ++m) div += dh1[i * n1_ + m] * gct(m, j, k, 0);
          for (int m = 0; m < n2_; ++m) div += dh2[j * n2_ + m] * gct(i, m, k, 1);
          for (int m = 0; m < n3_; ++m) div += dh3[k * n3_ + m] * gct(i, j, m, 2);
          mu_[dof(e, mesh.node_index(i, j, k))] = div;
        }

    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const FaceWork &w = fw_[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      const int nfp = face.nfp();
      for (int k = 0; k < nfp; ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        mu_[dof(e, qn)] += outsign * face.jf[k] * w.gcn_star[k] * invw;
      }
    }

    for (int qn = 0; qn < npe_; ++qn) {
      const int d = dof(e, qn);
      mu_[d] = chemical_free_energy_prime(q.at(e, qn)[0], params_) - coef * mu_[d] / geom.jac[qn];
    }
  }
}

// ---------------------------------------------------------------------------
// stage 2: entropy variables and their gradients

void DgOperator::compute_entropy_gradients(const Field &q, const OperatorOptions &opt) {
  const Mesh &mesh = *mesh_;
  const int nface = static_cast<int>(mesh.faces.size());

#pragma omp parallel for schedule(static)
  for (int e = 0; e < nelem_; ++e)
    for (int qn = 0; qn < npe_; ++qn)
      w_[dof(e, qn)] = entropy_vars(q.state(e, qn), mu_[dof(e, qn)], params_);

  parallel_for_throwing(nface, [&](int f) {
    FaceWork &w = fw_[f];
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    for (int k = 0; k < nfp; ++k) w.w_l[k] = w_[dof(face.left, face.idx_l[k])];
    if (face.right >= 0) {
      for (int k = 0; k < nfp; ++k) w.w_r[k] = w_[dof(face.right, face.idx_r[k])];
    } else {
      switch (face.kind) {
        case BcKind::free_slip:
        case BcKind::outflow:
          for (int k = 0; k < nfp; ++k) w.w_r[k] = w.w_l[k];
          break;
        case BcKind::no_slip:
          for (int k = 0; k < nfp; ++k)
            w.w_r[k] = {w.w_l[k][0], -w.w_l[k][1], -w.w_l[k][2], -w.w_l[k][3], w.w_l[k][4]};
          break;
        case BcKind::inflow: {
          if (!opt.inflow) throw Error("inflow face without inflow profile");
          for (int k = 0; k < nfp; ++k) {
            const InflowData data = (*opt.inflow)(w.xf[k], opt.time);
            w.w_r[k] = {w.w_l[k][0], data.u.x, data.u.y, data.u.z, w.w_l[k][4]};
          }
          break;
        }
        default:
          throw Error("entropy gradient: unexpected face kind");
      }
    }
    for (int k = 0; k < nfp; ++k)
      for (int m = 0; m < 5; ++m) w.wstar[k][m] = 0.5 * (w.w_l[k][m] + w.w_r[k][m]);
  });

#pragma omp parallel for schedule(static)
  for (int e = 0; e < nelem_; ++e) {
    const auto &geom = mesh.elems[e];
    const double *d1 = mesh.bases[0]->d_matrix().data();
    const double *d2 = mesh.bases[1]->d_matrix().data();
    const double *d3 = mesh.bases[2]->d_matrix().data();

    for (int k = 0; k < n3_; ++k)
      for (int j = 0; j < n2_; ++j)
        for (int i = 0; i < n1_; ++i) {
          const int qn = mesh.node_index(i, j, k);
          auto &gxi = gw_xi_[dof(e, qn)];
          for (int m = 0; m < 5; ++m) {
            double s1 = 0.0, s2 = 0.0, s3 = 0.0;
            for (int p = 0; p < n1_; ++p)
              s1 += d1[i * n1_ + p] * w_[dof(e, mesh.node_index(p, j, k))][m];
            for (int p = 0; p < n2_; ++p)
              s2 += d2[j * n2_ + p] * w_[dof(e, mesh.node_index(i, p, k))][m];
            for (int p = 0; p < n3_; ++p)
              s3 += d3[k * n3_ + p] * w_[dof(e, mesh.node_index(i, j, p))][m];
            gxi[0][m] = s1;
            gxi[1][m] = s2;
            gxi[2][m] = s3;
          }
          auto &gp = g_[dof(e, qn)];
          for (int d = 0; d < 3; ++d)
            for (int m = 0; m < 5; ++m)
              gp[d][m] = geom.ja[qn][0][d] * gxi[0][m] + geom.ja[qn][1][d] * gxi[1][m] +
                         geom.ja[qn][2][d] * gxi[2][m];
        }

    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const FaceWork &w = fw_[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      const int nfp = face.nfp();
      for (int k = 0; k < nfp; ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        const State &wside = (pos == 0) ? w.w_l[k] : w.w_r[k];
        const double fac = face.jf[k] * invw * outsign;
        auto &gp = g_[dof(e, qn)];
        for (int m = 0; m < 5; ++m) {
          const double dmu = (w.wstar[k][m] - wside[m]) * fac;
          gp[0][m] += dmu * face.normal[k].x;
          gp[1][m] += dmu * face.normal[k].y;
          gp[2][m] += dmu * face.normal[k].z;
        }
      }
    }

    for (int qn = 0; qn < npe_; ++qn) {
      const double inv_j = 1.0 / geom.jac[qn];
      auto &gp = g_[dof(e, qn)];
      for (int d = 0; d < 3; ++d)
        for (int m = 0; m < 5; ++m) gp[d][m] *= inv_j;
    }
  }
}

// ---------------------------------------------------------------------------
// stage 3: full residual

void DgOperator::eval_residual(const Field &q, Field &dqdt, const OperatorOptions &opt) {
  const Mesh &mesh = *mesh_;
  compute_concentration_gradient(q, opt);
  compute_chemical_potential(q, opt);
  compute_entropy_gradients(q, opt);

  const int nface = static_cast<int>(mesh.faces.size());

  // Face kernels: viscous stars and inviscid numerical/diamond fluxes.
  parallel_for_throwing(nface, [&](int f) {
    FaceWork &w = fw_[f];
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();

    // viscous normal fluxes per side
    for (int k = 0; k < nfp; ++k) {
      const int d_l = dof(face.left, face.idx_l[k]);
      const BlockState fv = viscous_flux(g_[d_l], q.at(face.left, face.idx_l[k])[0], params_);
      w.fvn_l[k] = contract(face.normal[k], fv);
      w.q_l[k] = q.state(face.left, face.idx_l[k]);
      w.mu_l[k] = w.w_l[k][0];
    }
    if (face.right >= 0) {
      for (int k = 0; k < nfp; ++k) {
        const int d_r = dof(face.right, face.idx_r[k]);
        const BlockState fv = viscous_flux(g_[d_r], q.at(face.right, face.idx_r[k])[0], params_);
        w.fvn_r[k] = contract(face.normal[k], fv);
        w.q_r[k] = q.state(face.right, face.idx_r[k]);
        w.mu_r[k] = w.w_r[k][0];
      }
    } else {
      for (int k = 0; k < nfp; ++k) {
        w.mu_r[k] = w.w_r[k][0];
        switch (face.kind) {
          case BcKind::free_slip:
            w.fvn_r[k] = -1.0 * w.fvn_l[k];
            break;
          case BcKind::no_slip:
            w.fvn_r[k] = {-w.fvn_l[k][0], w.fvn_l[k][1], w.fvn_l[k][2], w.fvn_l[k][3],
                          -w.fvn_l[k][4]};
            break;
          default:  // inflow/outflow: free outflow for the viscous system
            w.fvn_r[k] = w.fvn_l[k];
        }
      }
    }
    for (int k = 0; k < nfp; ++k) {
      const double beta = opt.kappa_beta * face.beta_geom[k];
      const ViscousFaceFlux vf =
          br1_viscous(w.w_l[k], w.w_r[k], w.fvn_l[k], w.fvn_r[k], beta);
      w.fvn_star[k] = vf.fvn_star;
    }

    // inviscid numerical and diamond fluxes
    for (int k = 0; k < nfp; ++k) {
      const FaceFrame fr{face.normal[k], face.tan1[k], face.tan2[k]};
      const State qn_l = rotate_to_face(w.q_l[k], fr);
      State qn_r;
      if (face.right >= 0) {
        qn_r = rotate_to_face(w.q_r[k], fr);
      } else {
        switch (face.kind) {
          case BcKind::free_slip:
          case BcKind::no_slip:
            qn_r = wall_ghost(qn_l);
            break;
          case BcKind::inflow:
            qn_r = inflow_ghost(qn_l, (*opt.inflow)(w.xf[k], opt.time), fr, params_);
            break;
          case BcKind::outflow:
            qn_r = outflow_ghost(qn_l);
            break;
          default:
            throw Error("inviscid face: unexpected kind");
        }
      }
      const InviscidFaceFlux ff =
          inviscid_face_flux(opt.mode, qn_l, qn_r, w.mu_l[k], w.mu_r[k], params_);
      const RotatedPrim pl = face_prim(qn_l, params_);
      const State defect_l = ff.fstar + ff.diamond_l - rotated_inviscid_flux(pl) -
                             rotated_noncons_flux(pl, w.mu_l[k], params_);
      w.inv_l[k] = rotate_back(defect_l, fr);
      if (face.right >= 0) {
        const RotatedPrim pr = face_prim(qn_r, params_);
        const State defect_r = ff.fstar + ff.diamond_r - rotated_inviscid_flux(pr) -
                               rotated_noncons_flux(pr, w.mu_r[k], params_);
        w.inv_r[k] = -1.0 * rotate_back(defect_r, fr);
      }
    }
  });

  // Element kernels: volume terms, surface scatter, sources.
#pragma omp parallel for schedule(static)
  for (int e = 0; e < nelem_; ++e) {
    const auto &geom = mesh.elems[e];
    const double *d1 = mesh.bases[0]->d_matrix().data();
    const double *d2 = mesh.bases[1]->d_matrix().data();
    const double *d3 = mesh.bases[2]->d_matrix().data();
    const double *dh1 = mesh.bases[0]->dhat_matrix().data();
    const double *dh2 = mesh.bases[1]->dhat_matrix().data();
    const double *dh3 = mesh.bases[2]->dhat_matrix().data();

    // nodal contravariant fluxes
    std::vector<BlockState> fe_t(npe_), fv_t(npe_);
    for (int qn = 0; qn < npe_; ++qn) {
      const State s = q.state(e, qn);
      const double c = s[0];
      const double rho = density(c, params_);
      const Vec3 u = velocity(s, params_);
      const double pr = s[4];
      const BlockState fv = viscous_flux(g_[dof(e, qn)], c, params_);
      for (int dir = 0; dir < 3; ++dir) {
        const Vec3 b = geom.ja[qn][dir];
        const double ut = dot(b, u);
        State &fe = fe_t[qn].slot(dir);
        fe[0] = c * ut;
        fe[1] = 0.5 * rho * u.x * ut + pr * b.x;
        fe[2] = 0.5 * rho * u.y * ut + pr * b.y;
        fe[3] = 0.5 * rho * u.z * ut + pr * b.z;
        fe[4] = 0.0;
        fv_t[qn].slot(dir) = contract(b, fv);
      }
    }

    for (int k = 0; k < n3_; ++k)
      for (int j = 0; j < n2_; ++j)
        for (int i = 0; i < n1_; ++i) {
          const int qn = mesh.node_index(i, j, k);
          const int dq = dof(e, qn);
          const State s = q.state(e, qn);
          const double c = s[0];
          const double rho = density(c, params_);
          const Vec3 u = velocity(s, params_);

          State res{};
          // inviscid strong volume divergence (minus: moved to the RHS)
          for (int m = 0; m < n1_; ++m) {
            const double dv = d1[i * n1_ + m];
            const State &fx = fe_t[mesh.node_index(m, j, k)].x;
            for (int r = 0; r < 5; ++r) res[r] -= dv * fx[r];
          }
          for (int m = 0; m < n2_; ++m) {
            const double dv = d2[j * n2_ + m];
            const State &fy = fe_t[mesh.node_index(i, m, k)].y;
            for (int r = 0; r < 5; ++r) res[r] -= dv * fy[r];
          }
          for (int m = 0; m < n3_; ++m) {
            const double dv = d3[k * n3_ + m];
            const State &fz = fe_t[mesh.node_index(i, j, m)].z;
            for (int r = 0; r < 5; ++r) res[r] -= dv * fz[r];
          }
          // viscous weak volume divergence (plus)
          for (int m = 0; m < n1_; ++m) {
            const double dv = dh1[i * n1_ + m];
            const State &fx = fv_t[mesh.node_index(m, j, k)].x;
            for (int r = 0; r < 5; ++r) res[r] += dv * fx[r];
          }
          for (int m = 0; m < n2_; ++m) {
            const double dv = dh2[j * n2_ + m];
            const State &fy = fv_t[mesh.node_index(i, m, k)].y;
            for (int r = 0; r < 5; ++r) res[r] += dv * fy[r];
          }
          for (int m = 0; m < n3_; ++m) {
            const double dv = dh3[k * n3_ + m];
            const State &fz = fv_t[mesh.node_index(i, j, m)].z;
            for (int r = 0; r < 5; ++r) res[r] += dv * fz[r];
          }
          // non-conservative volume terms (minus)
          const auto &gxi = gw_xi_[dq];
          for (int dir = 0; dir < 3; ++dir) {
            const Vec3 b = geom.ja[qn][dir];
            const double ut = dot(b, u);
            res[1] -= c * b.x * gxi[dir][0] + 0.5 * rho * ut * gxi[dir][1];
            res[2] -= c * b.y * gxi[dir][0] + 0.5 * rho * ut * gxi[dir][2];
            res[3] -= c * b.z * gxi[dir][0] + 0.5 * rho * ut * gxi[dir][3];
            res[4] -= params_.rho0c0sqr() *
                      (b.x * gxi[dir][1] + b.y * gxi[dir][2] + b.z * gxi[dir][3]);
          }
          // sources
          const double jac = geom.jac[qn];
          res[1] += jac * rho * params_.gravity.x;
          res[2] += jac * rho * params_.gravity.y;
          res[3] += jac * rho * params_.gravity.z;
          if (opt.mms) {
            const State sm = (*opt.mms)(geom.x[qn], opt.time);
            for (int r = 0; r < 5; ++r) res[r] += jac * sm[r];
          }
          dqdt.set_state(e, qn, res);
        }

    // surface scatter
    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const FaceWork &w = fw_[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      const int nfp = face.nfp();
      for (int k = 0; k < nfp; ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        const State &inv = (pos == 0) ? w.inv_l[k] : w.inv_r[k];
        const double fac = face.jf[k] * invw;
        double *out = dqdt.at(e, qn);
        for (int r = 0; r < 5; ++r)
          out[r] += fac * (outsign * w.fvn_star[k][r] - inv[r]);
      }
    }

    // mass matrix and Jacobian division
    for (int qn = 0; qn < npe_; ++qn) {
      const double inv_j = 1.0 / geom.jac[qn];
      const double inv_sr = 1.0 / std::sqrt(density(q.at(e, qn)[0], params_));
      double *out = dqdt.at(e, qn);
      out[0] *= inv_j;
      out[1] *= inv_j * inv_sr;
      out[2] *= inv_j * inv_sr;
      out[3] *= inv_j * inv_sr;
      out[4] *= inv_j;
    }
  }

  const int bad = dqdt.find_nan();
  if (bad >= 0) throw Error("residual is not finite in element " + std::to_string(bad));
}

void DgOperator::gather_concentration_rate(const Field &dqdt) {
  const Mesh &mesh = *mesh_;
  const int nface = static_cast<int>(mesh.faces.size());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < nface; ++f) {
    FaceWork &w = fw_[f];
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    for (int k = 0; k < nfp; ++k) w.ct_l[k] = dqdt.at(face.left, face.idx_l[k])[0];
    if (face.right >= 0) {
      for (int k = 0; k < nfp; ++k) w.ct_r[k] = dqdt.at(face.right, face.idx_r[k])[0];
    } else if (face.kind == BcKind::inflow) {
      for (int k = 0; k < nfp; ++k) w.ct_r[k] = 0.0;  // prescribed data is steady
    } else {
      for (int k = 0; k < nfp; ++k) w.ct_r[k] = w.ct_l[k];
    }
    for (int k = 0; k < nfp; ++k) w.ctstar[k] = 0.5 * (w.ct_l[k] + w.ct_r[k]);
  }
}

// ---------------------------------------------------------------------------
// homogeneous composed Cahn-Hilliard operator (implicit route)

void DgOperator::apply_ch_biharmonic(const std::vector<double> &x, std::vector<double> &y,
                                     double kappa_beta) {
  const Mesh &mesh = *mesh_;
  const int nface = static_cast<int>(mesh.faces.size());
  const size_t ndof = static_cast<size_t>(nelem_) * npe_;

  if (bh_xl_.empty()) {
    bh_xl_.resize(nface);
    bh_xr_.resize(nface);
    bh_hnl_.resize(nface);
    bh_hnr_.resize(nface);
    bh_star_.resize(nface);
    for (int f = 0; f < nface; ++f) {
      const int nfp = mesh.faces[f].nfp();
      bh_xl_[f].resize(nfp);
      bh_xr_[f].resize(nfp);
      bh_hnl_[f].resize(nfp);
      bh_hnr_[f].resize(nfp);
      bh_star_[f].resize(nfp);
    }
  }
  bh_grad_.assign(ndof, Vec3{});
  bh_mu_.assign(ndof, 0.0);
  y.assign(ndof, 0.0);
  OperatorOptions opt;  // no inflow data in the homogeneous operator

  auto gradient_pass = [&](const std::vector<double> &field, std::vector<Vec3> &out) {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < nelem_; ++e) {
      const auto &geom = mesh.elems[e];
      const double *d1 = mesh.bases[0]->d_matrix().data();
      const double *d2 = mesh.bases[1]->d_matrix().data();
      const double *d3 = mesh.bases[2]->d_matrix().data();
      const double *xe = field.data() + static_cast<size_t>(e) * npe_;
      for (int k = 0; k < n3_; ++k)
        for (int j = 0; j < n2_; ++j)
          for (int i = 0; i < n1_; ++i) {
            double s1 = 0.0, s2 = 0.0, s3 = 0.0;
            for (int m = 0; m < n1_; ++m) s1 += d1[i * n1_ + m] * xe[mesh.node_index(m, j, k)];
            for (int m = 0; m < n2_; ++m) s2 += d2[j * n2_ + m] * xe[mesh.node_index(i, m, k)];
            for (int m = 0; m < n3_; ++m) s3 += d3[k * n3_ + m] * xe[mesh.node_index(i, j, m)];
            const int qn = mesh.node_index(i, j, k);
            out[dof(e, qn)] = s1 * geom.ja[qn][0] + s2 * geom.ja[qn][1] + s3 * geom.ja[qn][2];
          }
      for (int s = 0; s < 6; ++s) {
        const auto [fid, pos] = mesh.elem_faces[e][s];
        const Face &face = mesh.faces[fid];
        const double invw = 1.0 / mesh.side_weight(s);
        const double outsign = (pos == 0) ? 1.0 : -1.0;
        for (int k = 0; k < face.nfp(); ++k) {
          const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
          const double xside = (pos == 0) ? bh_xl_[fid][k] : bh_xr_[fid][k];
          const double star = 0.5 * (bh_xl_[fid][k] + bh_xr_[fid][k]);
          out[dof(e, qn)] += ((star - xside) * face.jf[k] * invw * outsign) * face.normal[k];
        }
      }
      for (int qn = 0; qn < npe_; ++qn) out[dof(e, qn)] = (1.0 / geom.jac[qn]) * out[dof(e, qn)];
    }
  };

  auto divergence_pass = [&](const std::vector<Vec3> &h, std::vector<double> &out) {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < nelem_; ++e) {
      const auto &geom = mesh.elems[e];
      const double *dh1 = mesh.bases[0]->dhat_matrix().data();
      const double *dh2 = mesh.bases[1]->dhat_matrix().data();
      const double *dh3 = mesh.bases[2]->dhat_matrix().data();
      auto ht = [&](int i, int j, int k, int dir) {
        const int qn = mesh.node_index(i, j, k);
        return dot(geom.ja[qn][dir], h[dof(e, qn)]);
      };
      for (int k = 0; k < n3_; ++k)
        for (int j = 0; j < n2_; ++j)
          for (int i = 0; i < n1_; ++i) {
            double div = 0.0;
            for (int m = 0; m < n1_; ++m) div += dh1[i * n1_ + m] * ht(m, j, k, 0);
            for (int m = 0; m < n2_; ++m) div += dh2[j * n2_ + m] * ht(i, m, k, 1);
            for (int m = 0; m < n3_; ++m) div += dh3[k * n3_ + m] * ht(i, j, m, 2);
            out[dof(e, mesh.node_index(i, j, k))] = div;
          }
      for (int s = 0; s < 6; ++s) {
        const auto [fid, pos] = mesh.elem_faces[e][s];
        const Face &face = mesh.faces[fid];
        const double invw = 1.0 / mesh.side_weight(s);
        const double outsign = (pos == 0) ? 1.0 : -1.0;
        for (int k = 0; k < face.nfp(); ++k) {
          const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
          out[dof(e, qn)] += outsign * face.jf[k] * bh_star_[fid][k] * invw;
        }
      }
      for (int qn = 0; qn < npe_; ++qn) out[dof(e, qn)] /= geom.jac[qn];
    }
  };

  // pass A: traces and gradient of x (linear ghost rules)
#pragma omp parallel for schedule(static)
  for (int f = 0; f < nface; ++f)
    gather_scalar_face(mesh, x, f, bh_xl_[f], bh_xr_[f], ghost_conc_lin, opt, npe_, fw_[f].xf);
  gradient_pass(x, bh_grad_);

  // pass B: inner weak divergence with BR1 + penalty, homogeneous Neumann walls
#pragma omp parallel for schedule(static)
  for (int f = 0; f < nface; ++f) {
    const Face &face = mesh.faces[f];
    gather_normal_face(mesh, bh_grad_, f, bh_xl_[f], bh_hnl_[f], bh_hnr_[f], ghost_n_lin,
                       params_, npe_);
    for (int k = 0; k < face.nfp(); ++k) {
      const double beta = kappa_beta * face.beta_geom[k];
      bh_star_[f][k] =
          0.5 * (bh_hnl_[f][k] + bh_hnr_[f][k]) + beta * (bh_xr_[f][k] - bh_xl_[f][k]);
    }
  }
  divergence_pass(bh_grad_, bh_mu_);
  const double coef = -1.5 * params_.sigma * params_.eps;
  for (auto &v : bh_mu_) v *= coef;

  // pass C: traces and gradient of the linearized chemical potential
#pragma omp parallel for schedule(static)
  for (int f = 0; f < nface; ++f)
    gather_scalar_face(mesh, bh_mu_, f, bh_xl_[f], bh_xr_[f], ghost_copy, opt, npe_, fw_[f].xf);
  gradient_pass(bh_mu_, bh_grad_);

  // pass D: outer weak divergence with mobility and penalty on the jump
#pragma omp parallel for schedule(static)
  for (int f = 0; f < nface; ++f) {
    const Face &face = mesh.faces[f];
    gather_normal_face(mesh, bh_grad_, f, bh_xl_[f], bh_hnl_[f], bh_hnr_[f], ghost_n_lin,
                       params_, npe_);
    const double m0 = params_.mobility();
    for (int k = 0; k < face.nfp(); ++k) {
      const double beta = kappa_beta * face.beta_geom[k];
      bh_star_[f][k] = m0 * 0.5 * (bh_hnl_[f][k] + bh_hnr_[f][k]) +
                       beta * (bh_xr_[f][k] - bh_xl_[f][k]);
    }
  }
  {
    const double m0 = params_.mobility();
    for (auto &v : bh_grad_) v = m0 * v;
  }
  divergence_pass(bh_grad_, y);
}

}  // namespace espdg
