#include "espdg/diagnostics.hpp"

#include <cmath>

namespace espdg {

namespace {

bool is_wall(BcKind k) { return k == BcKind::free_slip || k == BcKind::no_slip; }

double entropy_volume_sum(const DgOperator &op, const Field &q) {
  const Mesh &mesh = op.mesh();
  const auto &jw = op.dof_mass();
  const auto &gc = op.gc();
  KahanSum sum;
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int p = 0; p < mesh.nodes_per_element(); ++p) {
      const int i = op.dof(e, p);
      sum.add(jw[i] * entropy_density(q.state(e, p), gc[i], op.params()).total);
    }
  return sum.get();
}

double beta_jump_sum(const DgOperator &op, double kappa_beta) {
  if (kappa_beta == 0.0) return 0.0;
  const Mesh &mesh = op.mesh();
  const auto &par = op.params();
  KahanSum sum;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face &face = mesh.faces[f];
    if (face.right < 0) continue;
    const FaceWork &w = op.face_work()[f];
    for (int k = 0; k < face.nfp(); ++k) {
      const double jump = w.c_r[k] - w.c_l[k];
      sum.add(face.wq[k] * face.jf[k] * kappa_beta * face.beta_geom[k] * jump * jump);
    }
  }
  return 0.75 * par.sigma * par.eps * sum.get();
}

}  // namespace

double total_entropy(DgOperator &op, const Field &q, const OperatorOptions &opt) {
  op.compute_concentration_gradient(q, opt);
  return entropy_volume_sum(op, q) + beta_jump_sum(op, opt.kappa_beta);
}

EntropyReport entropy_report(DgOperator &op, const Field &q, const Field &dqdt,
                             const OperatorOptions &opt, double t) {
  const Mesh &mesh = op.mesh();
  const PhysParams &par = op.params();
  op.gather_concentration_rate(dqdt);

  EntropyReport rep;
  rep.t = t;
  rep.e_total = entropy_volume_sum(op, q) + beta_jump_sum(op, opt.kappa_beta);

  // <J M Q_t, W>: the time-derivative contraction.
  KahanSum t1;
  const auto &jw = op.dof_mass();
  const auto &w = op.w();
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int p = 0; p < mesh.nodes_per_element(); ++p) {
      const int i = op.dof(e, p);
      const double *qs = q.at(e, p);
      const double *qt = dqdt.at(e, p);
      t1.add(jw[i] * (w[i][0] * qt[0] + qs[1] * qt[1] + qs[2] * qt[2] + qs[3] * qt[3] +
                      qs[4] * qt[4] / par.rho0c0sqr()));
    }

  // Cahn-Hilliard surface correction of the time contraction, plus the wall
  // free-energy derivative.
  KahanSum chsurf, dfw, fw;
  const double ce = 1.5 * par.sigma * par.eps;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face &face = mesh.faces[f];
    const FaceWork &fwk = op.face_work()[f];
    for (int k = 0; k < face.nfp(); ++k) {
      const double wj = face.wq[k] * face.jf[k];
      const double left = fwk.ct_l[k] * fwk.gcn_star[k] + fwk.ctstar[k] * fwk.gcn_l[k] -
                          fwk.ct_l[k] * fwk.gcn_l[k];
      chsurf.add(ce * wj * left);
      if (face.right >= 0) {
        const double right = fwk.ct_r[k] * fwk.gcn_star[k] + fwk.ctstar[k] * fwk.gcn_r[k] -
                             fwk.ct_r[k] * fwk.gcn_r[k];
        chsurf.add(-ce * wj * right);
      } else if (is_wall(face.kind)) {
        dfw.add(wj * wall_free_energy_prime(fwk.c_l[k], par) * fwk.ct_l[k]);
        fw.add(wj * wall_free_energy(fwk.c_l[k], par));
      }
    }
  }

  // Physical dissipation integral.
  KahanSum diss;
  const auto &g = op.grad_w();
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int p = 0; p < mesh.nodes_per_element(); ++p) {
      const int i = op.dof(e, p);
      const double gmu2 = g[i][0][0] * g[i][0][0] + g[i][1][0] * g[i][1][0] +
                          g[i][2][0] * g[i][2][0];
      double ss = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double s = 0.5 * (g[i][a][1 + b] + g[i][b][1 + a]);
          ss += s * s;
        }
      const double eta = viscosity(q.at(e, p)[0], par);
      diss.add(jw[i] * (par.mobility() * gmu2 + 2.0 * eta * ss));
    }

  rep.dissipation = diss.get();
  rep.surface_fw = fw.get();
  rep.dedt = t1.get() + chsurf.get() + dfw.get();
  rep.remainder = rep.dedt + rep.dissipation;
  return rep;
}

BubbleObservables bubble_observables(const Mesh &mesh, const Field &q, const PhysParams &par) {
  KahanSum area, xs, ys, zs, us, vs, ws;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto &geom = mesh.elems[e];
    int p = 0;
    for (int k = 0; k < mesh.bases[2]->count(); ++k)
      for (int j = 0; j < mesh.bases[1]->count(); ++j)
        for (int i = 0; i < mesh.bases[0]->count(); ++i, ++p) {
          const double wq = mesh.bases[0]->weight(i) * mesh.bases[1]->weight(j) *
                            mesh.bases[2]->weight(k) * geom.jac[p];
          const State s = q.state(e, p);
          const double m = wq * (1.0 - s[0]);
          const Vec3 u = velocity(s, par);
          area.add(m);
          xs.add(m * geom.x[p].x);
          ys.add(m * geom.x[p].y);
          zs.add(m * geom.x[p].z);
          us.add(m * u.x);
          vs.add(m * u.y);
          ws.add(m * u.z);
        }
  }
  const double a = area.get();
  if (!(a > 0.0)) throw Error("bubble_observables: non-positive (1-C) measure");
  return {{xs.get() / a, ys.get() / a, zs.get() / a}, {us.get() / a, vs.get() / a, ws.get() / a},
          a};
}

std::array<double, 5> l2_error(const Mesh &mesh, const Field &q,
                               const std::function<State(const Vec3 &, double)> &exact,
                               double t) {
  std::array<KahanSum, 5> sums;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto &geom = mesh.elems[e];
    int p = 0;
    for (int k = 0; k < mesh.bases[2]->count(); ++k)
      for (int j = 0; j < mesh.bases[1]->count(); ++j)
        for (int i = 0; i < mesh.bases[0]->count(); ++i, ++p) {
          const double wq = mesh.bases[0]->weight(i) * mesh.bases[1]->weight(j) *
                            mesh.bases[2]->weight(k) * geom.jac[p];
          const State ex = exact(geom.x[p], t);
          const double *qs = q.at(e, p);
          for (int m = 0; m < 5; ++m) {
            const double d = qs[m] - ex[m];
            sums[m].add(wq * d * d);
          }
        }
  }
  std::array<double, 5> out;
  for (int m = 0; m < 5; ++m) out[m] = std::sqrt(sums[m].get());
  return out;
}

double velocity_norm(const Mesh &mesh, const Field &q, const PhysParams &par) {
  KahanSum sum;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto &geom = mesh.elems[e];
    int p = 0;
    for (int k = 0; k < mesh.bases[2]->count(); ++k)
      for (int j = 0; j < mesh.bases[1]->count(); ++j)
        for (int i = 0; i < mesh.bases[0]->count(); ++i, ++p) {
          const double wq = mesh.bases[0]->weight(i) * mesh.bases[1]->weight(j) *
                            mesh.bases[2]->weight(k) * geom.jac[p];
          const Vec3 u = velocity(q.state(e, p), par);
          sum.add(wq * dot(u, u));
        }
  }
  return std::sqrt(sum.get());
}

double max_norm(const Field &f) {
  double m = 0.0;
  for (double v : f.raw()) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> static_pressure_field(const DgOperator &op, const Field &q) {
  const Mesh &mesh = op.mesh();
  const PhysParams &par = op.params();
  std::vector<double> ps(static_cast<size_t>(mesh.n_elements()) * mesh.nodes_per_element());
  const auto &gc = op.gc();
  const auto &mu = op.mu();
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int p = 0; p < mesh.nodes_per_element(); ++p) {
      const int i = op.dof(e, p);
      const double c = q.at(e, p)[0];
      const double fcap = chemical_free_energy(c, par) + 0.75 * par.sigma * par.eps *
                                                             dot(gc[i], gc[i]);
      ps[i] = q.at(e, p)[4] - (fcap - mu[i] * c);
    }
  return ps;
}

double probe_nodal_scalar(const Mesh &mesh, const std::vector<double> &nodal,
                          const Vec3 &point) {
  if (!mesh.corners) throw Error("probe: mesh has no corner representation");
  const auto &cm = *mesh.corners;
  const int npe = mesh.nodes_per_element();

  for (int e = 0; e < mesh.n_elements(); ++e) {
    // bounding box pre-check
    Vec3 lo = mesh.elems[e].x[0], hi = mesh.elems[e].x[0];
    for (const auto &x : mesh.elems[e].x)
      for (int d = 0; d < 3; ++d) {
        lo[d] = std::min(lo[d], x[d]);
        hi[d] = std::max(hi[d], x[d]);
      }
    const double tol = 1e-10 + 1e-10 * norm(hi - lo);
    bool inside_box = true;
    for (int d = 0; d < 3; ++d)
      inside_box = inside_box && point[d] >= lo[d] - tol && point[d] <= hi[d] + tol;
    if (!inside_box) continue;

    // Newton on the trilinear corner map
    std::array<Vec3, 8> cr;
    for (int c = 0; c < 8; ++c) cr[c] = cm.nodes[cm.hexes[e][c]];
    Vec3 xi{0, 0, 0};
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const double s = 0.5 * (xi.x + 1.0), t = 0.5 * (xi.y + 1.0), u = 0.5 * (xi.z + 1.0);
      Vec3 fx{}, dxs{}, dxt{}, dxu{};
      for (int ck = 0; ck < 2; ++ck)
        for (int cj = 0; cj < 2; ++cj)
          for (int ci = 0; ci < 2; ++ci) {
            const Vec3 &cc = cr[ci + 2 * cj + 4 * ck];
            const double a = ci ? s : 1.0 - s, da = ci ? 0.5 : -0.5;
            const double b = cj ? t : 1.0 - t, db = cj ? 0.5 : -0.5;
            const double c = ck ? u : 1.0 - u, dc = ck ? 0.5 : -0.5;
            fx += (a * b * c) * cc;
            dxs += (da * b * c) * cc;
            dxt += (a * db * c) * cc;
            dxu += (a * b * dc) * cc;
          }
      const Vec3 r = fx - point;
      if (norm(r) < 1e-13 * (1.0 + norm(point))) {
        converged = true;
        break;
      }
      // solve 3x3 J dxi = -r by Cramer
      const double det = dot(dxs, cross(dxt, dxu));
      if (std::abs(det) < 1e-300) break;
      const Vec3 mr = -1.0 * r;
      xi.x += dot(mr, cross(dxt, dxu)) / det;
      xi.y += dot(dxs, cross(mr, dxu)) / det;
      xi.z += dot(dxs, cross(dxt, mr)) / det;
    }
    if (!converged) continue;
    const double eps = 1e-9;
    if (std::abs(xi.x) > 1.0 + eps || std::abs(xi.y) > 1.0 + eps || std::abs(xi.z) > 1.0 + eps)
      continue;
    xi.x = std::clamp(xi.x, -1.0, 1.0);
    xi.y = std::clamp(xi.y, -1.0, 1.0);
    xi.z = std::clamp(xi.z, -1.0, 1.0);

    // tensor-product barycentric interpolation
    const int n1 = mesh.bases[0]->count(), n2 = mesh.bases[1]->count(),
              n3 = mesh.bases[2]->count();
    std::vector<double> line(n1), plane(n2), column(n3);
    for (int k = 0; k < n3; ++k) {
      for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i)
          line[i] = nodal[static_cast<size_t>(e) * npe + mesh.node_index(i, j, k)];
        plane[j] = mesh.bases[0]->interpolate(line, xi.x);
      }
      column[k] = mesh.bases[1]->interpolate(plane, xi.y);
    }
    return mesh.bases[2]->interpolate(column, xi.z);
  }
  throw Error("probe: point outside mesh");
}

}  // namespace espdg
