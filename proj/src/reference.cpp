#include "espdg/reference.hpp"

#include <cmath>

namespace espdg::reference {

namespace {

struct FaceTraces {
  std::vector<double> c_l, c_r, cstar, gcn_l, gcn_r, gcn_star;
  std::vector<State> w_l, w_r, wstar, fvn_l, fvn_r, fvn_star, inv_l, inv_r;
};

bool wall(BcKind k) { return k == BcKind::free_slip || k == BcKind::no_slip; }

}  // namespace

void eval_residual_serial(const Mesh &mesh, const PhysParams &par, const Field &q, Field &dqdt,
                          const OperatorOptions &opt) {
  const int nelem = mesh.n_elements();
  const int npe = mesh.nodes_per_element();
  const int n1 = mesh.bases[0]->count(), n2 = mesh.bases[1]->count(), n3 = mesh.bases[2]->count();
  const size_t ndof = static_cast<size_t>(nelem) * npe;
  auto dof = [&](int e, int qn) { return static_cast<size_t>(e) * npe + qn; };

  std::vector<double> mu(ndof, 0.0);
  std::vector<Vec3> gc(ndof);
  std::vector<State> w(ndof);
  std::vector<std::array<State, 3>> g(ndof), gxi(ndof);
  std::vector<FaceTraces> tr(mesh.faces.size());

  auto face_x = [&](const Face &face, int k) { return mesh.elems[face.left].x[face.idx_l[k]]; };

  // strong reference-space derivative of a nodal scalar accessor
  auto strong_deriv = [&](int e, auto &&value, int i, int j, int k, int dir) {
    double s = 0.0;
    if (dir == 0)
      for (int m = 0; m < n1; ++m) s += mesh.bases[0]->d(i, m) * value(e, m, j, k);
    else if (dir == 1)
      for (int m = 0; m < n2; ++m) s += mesh.bases[1]->d(j, m) * value(e, i, m, k);
    else
      for (int m = 0; m < n3; ++m) s += mesh.bases[2]->d(k, m) * value(e, i, j, m);
    return s;
  };
  auto weak_deriv = [&](int e, auto &&value, int i, int j, int k, int dir) {
    double s = 0.0;
    if (dir == 0)
      for (int m = 0; m < n1; ++m) s += mesh.bases[0]->dhat(i, m) * value(e, m, j, k);
    else if (dir == 1)
      for (int m = 0; m < n2; ++m) s += mesh.bases[1]->dhat(j, m) * value(e, i, m, k);
    else
      for (int m = 0; m < n3; ++m) s += mesh.bases[2]->dhat(k, m) * value(e, i, j, m);
    return s;
  };

  // --- concentration traces and gradient -----------------------------------
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    auto &t = tr[f];
    t.c_l.resize(nfp);
    t.c_r.resize(nfp);
    t.cstar.resize(nfp);
    for (int k = 0; k < nfp; ++k) t.c_l[k] = q.at(face.left, face.idx_l[k])[0];
    for (int k = 0; k < nfp; ++k) {
      if (face.right >= 0)
        t.c_r[k] = q.at(face.right, face.idx_r[k])[0];
      else if (face.kind == BcKind::inflow)
        t.c_r[k] = (*opt.inflow)(face_x(face, k), opt.time).c;
      else
        t.c_r[k] = t.c_l[k];
      t.cstar[k] = 0.5 * (t.c_l[k] + t.c_r[k]);
    }
  }

  auto cval = [&](int e, int i, int j, int k) { return q.at(e, mesh.node_index(i, j, k))[0]; };
  for (int e = 0; e < nelem; ++e) {
    const auto &geom = mesh.elems[e];
    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
          const int qn = mesh.node_index(i, j, k);
          Vec3 acc{};
          for (int dir = 0; dir < 3; ++dir)
            acc += strong_deriv(e, cval, i, j, k, dir) * geom.ja[qn][dir];
          gc[dof(e, qn)] = acc;
        }
    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const auto &t = tr[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      for (int k = 0; k < face.nfp(); ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        const double cside = (pos == 0) ? t.c_l[k] : t.c_r[k];
        gc[dof(e, qn)] += ((t.cstar[k] - cside) * face.jf[k] * invw * outsign) * face.normal[k];
      }
    }
    for (int qn = 0; qn < npe; ++qn) gc[dof(e, qn)] = (1.0 / geom.jac[qn]) * gc[dof(e, qn)];
  }

  // --- chemical potential ----------------------------------------------------
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    auto &t = tr[f];
    t.gcn_l.resize(nfp);
    t.gcn_r.resize(nfp);
    t.gcn_star.resize(nfp);
    for (int k = 0; k < nfp; ++k)
      t.gcn_l[k] = dot(gc[dof(face.left, face.idx_l[k])], face.normal[k]);
    for (int k = 0; k < nfp; ++k) {
      if (face.right >= 0)
        t.gcn_r[k] = dot(gc[dof(face.right, face.idx_r[k])], face.normal[k]);
      else if (wall(face.kind))
        t.gcn_r[k] =
            -4.0 / (3.0 * par.sigma * par.eps) * wall_free_energy_prime(t.c_l[k], par) -
            t.gcn_l[k];
      else
        t.gcn_r[k] = t.gcn_l[k];
      const double beta = opt.kappa_beta * face.beta_geom[k];
      t.gcn_star[k] = 0.5 * (t.gcn_l[k] + t.gcn_r[k]) + beta * (t.c_r[k] - t.c_l[k]);
    }
  }

  auto gct = [&](int e, int i, int j, int k, int dir) {
    const int qn = mesh.node_index(i, j, k);
    return dot(mesh.elems[e].ja[qn][dir], gc[dof(e, qn)]);
  };
  for (int e = 0; e < nelem; ++e) {
    const auto &geom = mesh.elems[e];
    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
          double div = 0.0;
          for (int dir = 0; dir < 3; ++dir)
            div += weak_deriv(
                e, [&](int ee, int ii, int jj, int kk) { return gct(ee, ii, jj, kk, dir); }, i,
                j, k, dir);
          mu[dof(e, mesh.node_index(i, j, k))] = div;
        }
    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      for (int k = 0; k < face.nfp(); ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        mu[dof(e, qn)] += outsign * face.jf[k] * tr[fid].gcn_star[k] * invw;
      }
    }
    for (int qn = 0; qn < npe; ++qn)
      mu[dof(e, qn)] = chemical_free_energy_prime(q.at(e, qn)[0], par) -
                       1.5 * par.sigma * par.eps * mu[dof(e, qn)] / geom.jac[qn];
  }

  // --- entropy variables and gradients ---------------------------------------
  for (int e = 0; e < nelem; ++e)
    for (int qn = 0; qn < npe; ++qn)
      w[dof(e, qn)] = entropy_vars(q.state(e, qn), mu[dof(e, qn)], par);

  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    auto &t = tr[f];
    t.w_l.resize(nfp);
    t.w_r.resize(nfp);
    t.wstar.resize(nfp);
    for (int k = 0; k < nfp; ++k) t.w_l[k] = w[dof(face.left, face.idx_l[k])];
    for (int k = 0; k < nfp; ++k) {
      if (face.right >= 0) {
        t.w_r[k] = w[dof(face.right, face.idx_r[k])];
      } else if (face.kind == BcKind::no_slip) {
        t.w_r[k] = {t.w_l[k][0], -t.w_l[k][1], -t.w_l[k][2], -t.w_l[k][3], t.w_l[k][4]};
      } else if (face.kind == BcKind::inflow) {
        const InflowData data = (*opt.inflow)(face_x(face, k), opt.time);
        t.w_r[k] = {t.w_l[k][0], data.u.x, data.u.y, data.u.z, t.w_l[k][4]};
      } else {
        t.w_r[k] = t.w_l[k];
      }
      for (int m = 0; m < 5; ++m) t.wstar[k][m] = 0.5 * (t.w_l[k][m] + t.w_r[k][m]);
    }
  }

  for (int e = 0; e < nelem; ++e) {
    const auto &geom = mesh.elems[e];
    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
          const int qn = mesh.node_index(i, j, k);
          for (int m = 0; m < 5; ++m) {
            auto wm = [&](int ee, int ii, int jj, int kk) {
              return w[dof(ee, mesh.node_index(ii, jj, kk))][m];
            };
            for (int dir = 0; dir < 3; ++dir)
              gxi[dof(e, qn)][dir][m] = strong_deriv(e, wm, i, j, k, dir);
          }
          for (int d = 0; d < 3; ++d)
            for (int m = 0; m < 5; ++m) {
              double s = 0.0;
              for (int dir = 0; dir < 3; ++dir)
                s += geom.ja[qn][dir][d] * gxi[dof(e, qn)][dir][m];
              g[dof(e, qn)][d][m] = s;
            }
        }
    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const auto &t = tr[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      for (int k = 0; k < face.nfp(); ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        const State &wside = (pos == 0) ? t.w_l[k] : t.w_r[k];
        for (int m = 0; m < 5; ++m) {
          const double dmu = (t.wstar[k][m] - wside[m]) * face.jf[k] * invw * outsign;
          g[dof(e, qn)][0][m] += dmu * face.normal[k].x;
          g[dof(e, qn)][1][m] += dmu * face.normal[k].y;
          g[dof(e, qn)][2][m] += dmu * face.normal[k].z;
        }
      }
    }
    for (int qn = 0; qn < npe; ++qn)
      for (int d = 0; d < 3; ++d)
        for (int m = 0; m < 5; ++m) g[dof(e, qn)][d][m] /= geom.jac[qn];
  }

  // --- face fluxes ------------------------------------------------------------
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face &face = mesh.faces[f];
    const int nfp = face.nfp();
    auto &t = tr[f];
    t.fvn_l.resize(nfp);
    t.fvn_r.resize(nfp);
    t.fvn_star.resize(nfp);
    t.inv_l.resize(nfp);
    t.inv_r.resize(nfp);
    for (int k = 0; k < nfp; ++k) {
      t.fvn_l[k] = contract(face.normal[k],
                            viscous_flux(g[dof(face.left, face.idx_l[k])], t.c_l[k], par));
      if (face.right >= 0)
        t.fvn_r[k] = contract(face.normal[k],
                              viscous_flux(g[dof(face.right, face.idx_r[k])], t.c_r[k], par));
      else if (face.kind == BcKind::free_slip)
        t.fvn_r[k] = -1.0 * t.fvn_l[k];
      else if (face.kind == BcKind::no_slip)
        t.fvn_r[k] = {-t.fvn_l[k][0], t.fvn_l[k][1], t.fvn_l[k][2], t.fvn_l[k][3],
                      -t.fvn_l[k][4]};
      else
        t.fvn_r[k] = t.fvn_l[k];
      const double beta = opt.kappa_beta * face.beta_geom[k];
      t.fvn_star[k] = br1_viscous(t.w_l[k], t.w_r[k], t.fvn_l[k], t.fvn_r[k], beta).fvn_star;

      const FaceFrame fr{face.normal[k], face.tan1[k], face.tan2[k]};
      const State qn_l = rotate_to_face(q.state(face.left, face.idx_l[k]), fr);
      State qn_r;
      if (face.right >= 0)
        qn_r = rotate_to_face(q.state(face.right, face.idx_r[k]), fr);
      else if (wall(face.kind))
        qn_r = wall_ghost(qn_l);
      else if (face.kind == BcKind::inflow)
        qn_r = inflow_ghost(qn_l, (*opt.inflow)(face_x(face, k), opt.time), fr, par);
      else
        qn_r = outflow_ghost(qn_l);

      const double mu_l = t.w_l[k][0], mu_r = t.w_r[k][0];
      const InviscidFaceFlux ff = inviscid_face_flux(opt.mode, qn_l, qn_r, mu_l, mu_r, par);
      const RotatedPrim pl = face_prim(qn_l, par);
      t.inv_l[k] = rotate_back(ff.fstar + ff.diamond_l - rotated_inviscid_flux(pl) -
                                   rotated_noncons_flux(pl, mu_l, par),
                               fr);
      if (face.right >= 0) {
        const RotatedPrim pr = face_prim(qn_r, par);
        t.inv_r[k] = -1.0 * rotate_back(ff.fstar + ff.diamond_r - rotated_inviscid_flux(pr) -
                                            rotated_noncons_flux(pr, mu_r, par),
                                        fr);
      }
    }
  }

  // --- volume terms, scatter, sources ----------------------------------------
  for (int e = 0; e < nelem; ++e) {
    const auto &geom = mesh.elems[e];
    std::vector<BlockState> fe_t(npe), fv_t(npe);
    std::vector<std::array<std::array<State, 5>, 3>> phi_t(npe);
    for (int qn = 0; qn < npe; ++qn) {
      const State s = q.state(e, qn);
      const BlockState fe = inviscid_flux(s, par);
      const BlockState fv = viscous_flux(g[dof(e, qn)], s[0], par);
      const auto phi = noncons_coefficients(s, par);
      for (int dir = 0; dir < 3; ++dir) {
        fe_t[qn].slot(dir) = contract(geom.ja[qn][dir], fe);
        fv_t[qn].slot(dir) = contract(geom.ja[qn][dir], fv);
        for (int m = 0; m < 5; ++m) phi_t[qn][dir][m] = contract(geom.ja[qn][dir], phi[m]);
      }
    }

    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
          const int qn = mesh.node_index(i, j, k);
          State res{};
          for (int dir = 0; dir < 3; ++dir)
            for (int r = 0; r < 5; ++r) {
              res[r] -= strong_deriv(
                  e,
                  [&](int ee, int ii, int jj, int kk) {
                    (void)ee;
                    return fe_t[mesh.node_index(ii, jj, kk)].slot(dir)[r];
                  },
                  i, j, k, dir);
              res[r] += weak_deriv(
                  e,
                  [&](int ee, int ii, int jj, int kk) {
                    (void)ee;
                    return fv_t[mesh.node_index(ii, jj, kk)].slot(dir)[r];
                  },
                  i, j, k, dir);
            }
          for (int dir = 0; dir < 3; ++dir)
            for (int m = 0; m < 5; ++m)
              for (int r = 0; r < 5; ++r)
                res[r] -= phi_t[qn][dir][m][r] * gxi[dof(e, qn)][dir][m];

          const State src = source(q.state(e, qn), par);
          for (int r = 0; r < 5; ++r) res[r] += geom.jac[qn] * src[r];
          if (opt.mms) {
            const State sm = (*opt.mms)(geom.x[qn], opt.time);
            for (int r = 0; r < 5; ++r) res[r] += geom.jac[qn] * sm[r];
          }
          dqdt.set_state(e, qn, res);
        }

    for (int s = 0; s < 6; ++s) {
      const auto [fid, pos] = mesh.elem_faces[e][s];
      const Face &face = mesh.faces[fid];
      const auto &t = tr[fid];
      const double invw = 1.0 / mesh.side_weight(s);
      const double outsign = (pos == 0) ? 1.0 : -1.0;
      for (int k = 0; k < face.nfp(); ++k) {
        const int qn = (pos == 0) ? face.idx_l[k] : face.idx_r[k];
        const State &inv = (pos == 0) ? t.inv_l[k] : t.inv_r[k];
        double *out = dqdt.at(e, qn);
        for (int r = 0; r < 5; ++r)
          out[r] += face.jf[k] * invw * (outsign * t.fvn_star[k][r] - inv[r]);
      }
    }

    for (int qn = 0; qn < npe; ++qn) {
      const double inv_j = 1.0 / geom.jac[qn];
      const double inv_sr = 1.0 / std::sqrt(density(q.at(e, qn)[0], par));
      double *out = dqdt.at(e, qn);
      out[0] *= inv_j;
      out[1] *= inv_j * inv_sr;
      out[2] *= inv_j * inv_sr;
      out[3] *= inv_j * inv_sr;
      out[4] *= inv_j;
    }
  }
}

}  // namespace espdg::reference
