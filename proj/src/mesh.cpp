#include "espdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace espdg {

BcKind bc_kind_from_string(const std::string &s) {
  if (s == "interior") return BcKind::interior;
  if (s == "periodic") return BcKind::periodic;
  if (s == "free_slip") return BcKind::free_slip;
  if (s == "no_slip") return BcKind::no_slip;
  if (s == "inflow") return BcKind::inflow;
  if (s == "outflow") return BcKind::outflow;
  throw Error("unknown boundary kind: " + s);
}

std::string to_string(BcKind k) {
  switch (k) {
    case BcKind::interior: return "interior";
    case BcKind::periodic: return "periodic";
    case BcKind::free_slip: return "free_slip";
    case BcKind::no_slip: return "no_slip";
    case BcKind::inflow: return "inflow";
    case BcKind::outflow: return "outflow";
  }
  return "?";
}

namespace {

// Local sides: 0 xi-, 1 xi+, 2 eta-, 3 eta+, 4 zeta-, 5 zeta+.
// Face parameterization (a,b): xi-faces -> (eta,zeta), eta-faces -> (xi,zeta),
// zeta-faces -> (xi,eta).
void side_axes(int side, int &dir, int &high, int &ta, int &tb) {
  dir = side / 2;
  high = side % 2;
  ta = (dir == 0) ? 1 : 0;
  tb = (dir == 2) ? 1 : 2;
}

int volume_node(const Mesh &mesh, int side, int a, int b) {
  int dir, high, ta, tb;
  side_axes(side, dir, high, ta, tb);
  const auto n = mesh.counts();
  int ijk[3];
  ijk[dir] = high ? n[dir] - 1 : 0;
  ijk[ta] = a;
  ijk[tb] = b;
  return mesh.node_index(ijk[0], ijk[1], ijk[2]);
}

// Orientation code: bit0 swap, bit1 flip first, bit2 flip second. Maps a
// face node (a,b) of the left parameterization to (u,v) on the right side.
void map_ab(int orient, int a, int b, int na_r, int nb_r, int &u, int &v) {
  int p = (orient & 1) ? b : a;
  int q = (orient & 1) ? a : b;
  u = (orient & 2) ? na_r - p : p;
  v = (orient & 4) ? nb_r - q : q;
}

// Corner ids of side `side` of a hex (lexicographic corner order), listed in
// face-parameter order (0,0),(1,0),(0,1),(1,1).
std::array<int, 4> side_corners(const std::array<int, 8> &hex, int side) {
  int dir, high, ta, tb;
  side_axes(side, dir, high, ta, tb);
  std::array<int, 4> out;
  for (int q = 0; q < 2; ++q)
    for (int p = 0; p < 2; ++p) {
      int ijk[3];
      ijk[dir] = high;
      ijk[ta] = p;
      ijk[tb] = q;
      out[q * 2 + p] = hex[ijk[0] + 2 * ijk[1] + 4 * ijk[2]];
    }
  return out;
}

std::array<int, 4> sorted_key(std::array<int, 4> c) {
  std::sort(c.begin(), c.end());
  return c;
}

void covariant_vectors(const ElementGeometry &geom,
                       const std::array<std::shared_ptr<const NodalBasis>, 3> &bases,
                       std::vector<std::array<Vec3, 3>> &cov) {
  const int n1 = bases[0]->count(), n2 = bases[1]->count(), n3 = bases[2]->count();
  auto idx = [&](int i, int j, int k) { return (k * n2 + j) * n1 + i; };
  cov.assign(static_cast<size_t>(n1) * n2 * n3, {});
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        Vec3 a1{}, a2{}, a3{};
        for (int m = 0; m < n1; ++m) a1 += bases[0]->d(i, m) * geom.x[idx(m, j, k)];
        for (int m = 0; m < n2; ++m) a2 += bases[1]->d(j, m) * geom.x[idx(i, m, k)];
        for (int m = 0; m < n3; ++m) a3 += bases[2]->d(k, m) * geom.x[idx(i, j, m)];
        cov[idx(i, j, k)] = {a1, a2, a3};
      }
}

}  // namespace

void compute_metrics_curl_form(ElementGeometry &geom,
                               const std::array<std::shared_ptr<const NodalBasis>, 3> &bases) {
  const int n1 = bases[0]->count(), n2 = bases[1]->count(), n3 = bases[2]->count();
  const int npe = n1 * n2 * n3;
  auto idx = [&](int i, int j, int k) { return (k * n2 + j) * n1 + i; };

  std::vector<std::array<Vec3, 3>> cov;
  covariant_vectors(geom, bases, cov);

  geom.jac.resize(npe);
  for (int q = 0; q < npe; ++q)
    geom.jac[q] = dot(cov[q][0], cross(cov[q][1], cov[q][2]));

  // Curl form: Ja^i_n = -[curl_xi(X_l grad_xi X_m)]_i, (n,m,l) cyclic.
  geom.ja.assign(npe, {});
  std::vector<Vec3> v(npe);  // v[node][i] = X_l dX_m/dxi^i for the current n
  for (int n = 0; n < 3; ++n) {
    const int m = (n + 1) % 3, l = (n + 2) % 3;
    for (int q = 0; q < npe; ++q)
      for (int d = 0; d < 3; ++d) v[q][d] = geom.x[q][l] * cov[q][d][m];

    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
          Vec3 d1{}, d2{}, d3{};  // d/dxi, d/deta, d/dzeta of v
          for (int p = 0; p < n1; ++p) d1 += bases[0]->d(i, p) * v[idx(p, j, k)];
          for (int p = 0; p < n2; ++p) d2 += bases[1]->d(j, p) * v[idx(i, p, k)];
          for (int p = 0; p < n3; ++p) d3 += bases[2]->d(k, p) * v[idx(i, j, p)];
          const int q = idx(i, j, k);
          geom.ja[q][0][n] = -(d2.z - d3.y);
          geom.ja[q][1][n] = -(d3.x - d1.z);
          geom.ja[q][2][n] = -(d1.y - d2.x);
        }
  }
}

double Mesh::side_weight(int side) const {
  const int dir = side / 2;
  const int high = side % 2;
  return bases[dir]->weight(high ? bases[dir]->degree() : 0);
}

void Mesh::finalize() {
  npe_ = bases[0]->count() * bases[1]->count() * bases[2]->count();
  elem_faces.assign(elems.size(), {std::pair<int, int>{-1, -1}, {-1, -1}, {-1, -1},
                                   {-1, -1}, {-1, -1}, {-1, -1}});
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    elem_faces[faces[f].left][faces[f].side_l] = {f, 0};
    if (faces[f].right >= 0) elem_faces[faces[f].right][faces[f].side_r] = {f, 1};
  }
  for (int e = 0; e < static_cast<int>(elems.size()); ++e)
    for (int s = 0; s < 6; ++s)
      if (elem_faces[e][s].first < 0) throw Error("mesh: element side without a face");
}

namespace {

void fill_face_geometry(Mesh &mesh) {
  const int nmax = std::max({mesh.bases[0]->degree(), mesh.bases[1]->degree(),
                             mesh.bases[2]->degree()});
  for (auto &face : mesh.faces) {
    int dir, high, ta, tb;
    side_axes(face.side_l, dir, high, ta, tb);
    face.na = mesh.bases[ta]->degree();
    face.nb = mesh.bases[tb]->degree();
    const int nfp = face.nfp();
    face.normal.resize(nfp);
    face.tan1.resize(nfp);
    face.tan2.resize(nfp);
    face.jf.resize(nfp);
    face.wq.resize(nfp);
    face.beta_geom.resize(nfp);
    face.idx_l.resize(nfp);
    face.idx_r.clear();
    if (face.right >= 0) face.idx_r.resize(nfp);

    // Right-side tangential degrees, for the orientation map.
    int na_r = 0, nb_r = 0;
    if (face.right >= 0) {
      int dr, hr, tar, tbr;
      side_axes(face.side_r, dr, hr, tar, tbr);
      na_r = mesh.bases[tar]->degree();
      nb_r = mesh.bases[tbr]->degree();
      const bool swap = face.orient & 1;
      if ((swap && (face.na != nb_r || face.nb != na_r)) ||
          (!swap && (face.na != na_r || face.nb != nb_r)))
        throw Error("mesh: non-conforming tangential degrees across a face");
    }

    const auto &geom = mesh.elems[face.left];
    std::vector<std::array<Vec3, 3>> cov;
    covariant_vectors(geom, mesh.bases, cov);
    const int tfirst = (dir == 0) ? 1 : 0;
    const double sign = high ? 1.0 : -1.0;

    for (int b = 0; b <= face.nb; ++b)
      for (int a = 0; a <= face.na; ++a) {
        const int fi = b * (face.na + 1) + a;
        const int ql = volume_node(mesh, face.side_l, a, b);
        face.idx_l[fi] = ql;
        face.wq[fi] = mesh.bases[ta]->weight(a) * mesh.bases[tb]->weight(b);
        const Vec3 raw = sign * geom.ja[ql][dir];
        const double jfv = norm(raw);
        if (!(jfv > 0.0)) throw Error("mesh: zero face Jacobian");
        face.jf[fi] = jfv;
        const Vec3 n = (1.0 / jfv) * raw;
        Vec3 t = cov[ql][tfirst];
        t = t - dot(t, n) * n;
        const double tn = norm(t);
        if (!(tn > 0.0)) throw Error("mesh: degenerate face tangent");
        t = (1.0 / tn) * t;
        face.normal[fi] = n;
        face.tan1[fi] = t;
        face.tan2[fi] = cross(n, t);

        double inv_j = 1.0 / geom.jac[ql];
        if (face.right >= 0) {
          int u, v;
          map_ab(face.orient, a, b, na_r, nb_r, u, v);
          const int qr = volume_node(mesh, face.side_r, u, v);
          face.idx_r[fi] = qr;
          inv_j = 0.5 * (inv_j + 1.0 / mesh.elems[face.right].jac[qr]);
        }
        face.beta_geom[fi] = 0.5 * nmax * (nmax + 1) * jfv * inv_j;
      }
  }
}

void trilinear_element(ElementGeometry &geom, const std::array<Vec3, 8> &corners,
                       const std::array<std::shared_ptr<const NodalBasis>, 3> &bases) {
  const int n1 = bases[0]->count(), n2 = bases[1]->count(), n3 = bases[2]->count();
  geom.x.resize(static_cast<size_t>(n1) * n2 * n3);
  int q = 0;
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i, ++q) {
        const double s = 0.5 * (bases[0]->node(i) + 1.0);
        const double t = 0.5 * (bases[1]->node(j) + 1.0);
        const double u = 0.5 * (bases[2]->node(k) + 1.0);
        Vec3 x{};
        for (int ck = 0; ck < 2; ++ck)
          for (int cj = 0; cj < 2; ++cj)
            for (int ci = 0; ci < 2; ++ci) {
              const double w = (ci ? s : 1.0 - s) * (cj ? t : 1.0 - t) * (ck ? u : 1.0 - u);
              x += w * corners[ci + 2 * cj + 4 * ck];
            }
        geom.x[q] = x;
      }
}

}  // namespace

Mesh build_cartesian(const Vec3 &lower, const Vec3 &upper, const std::array<int, 3> &counts,
                     const std::array<int, 3> &degrees, const std::array<bool, 3> &periodic,
                     const std::array<BcKind, 6> &tags) {
  for (int d = 0; d < 3; ++d) {
    if (counts[d] < 1) throw Error("build_cartesian: counts must be >= 1");
    if (degrees[d] < 1) throw Error("build_cartesian: degrees must be >= 1");
    if (!(upper[d] > lower[d])) throw Error("build_cartesian: box has zero extent");
  }

  Mesh mesh;
  for (int d = 0; d < 3; ++d) mesh.bases[d] = std::make_shared<NodalBasis>(degrees[d]);

  const int mx = counts[0], my = counts[1], mz = counts[2];
  const Vec3 h{(upper.x - lower.x) / mx, (upper.y - lower.y) / my, (upper.z - lower.z) / mz};
  auto eid = [&](int ix, int iy, int iz) { return ix + mx * (iy + my * iz); };

  mesh.elems.resize(static_cast<size_t>(mx) * my * mz);
  mesh.corners = std::make_shared<CornerMesh>();
  auto &cm = *mesh.corners;
  cm.nodes.resize(static_cast<size_t>(mx + 1) * (my + 1) * (mz + 1));
  auto nid = [&](int ix, int iy, int iz) { return ix + (mx + 1) * (iy + (my + 1) * iz); };
  for (int iz = 0; iz <= mz; ++iz)
    for (int iy = 0; iy <= my; ++iy)
      for (int ix = 0; ix <= mx; ++ix)
        cm.nodes[nid(ix, iy, iz)] = {lower.x + ix * h.x, lower.y + iy * h.y, lower.z + iz * h.z};
  cm.hexes.resize(mesh.elems.size());

  for (int iz = 0; iz < mz; ++iz)
    for (int iy = 0; iy < my; ++iy)
      for (int ix = 0; ix < mx; ++ix) {
        const int e = eid(ix, iy, iz);
        std::array<Vec3, 8> corners;
        for (int ck = 0; ck < 2; ++ck)
          for (int cj = 0; cj < 2; ++cj)
            for (int ci = 0; ci < 2; ++ci) {
              corners[ci + 2 * cj + 4 * ck] = cm.nodes[nid(ix + ci, iy + cj, iz + ck)];
              cm.hexes[e][ci + 2 * cj + 4 * ck] = nid(ix + ci, iy + cj, iz + ck);
            }
        trilinear_element(mesh.elems[e], corners, mesh.bases);
        compute_metrics_curl_form(mesh.elems[e], mesh.bases);
      }

  // Faces, direction by direction; orientation is always the identity.
  const std::array<int, 3> m{mx, my, mz};
  for (int d = 0; d < 3; ++d) {
    const int sa = (d == 0) ? my : mx;
    const int sb = (d == 2) ? my : mz;
    for (int ib = 0; ib < sb; ++ib)
      for (int ia = 0; ia < sa; ++ia)
        for (int s = 0; s <= m[d]; ++s) {
          auto slab_eid = [&](int pos) {
            int ijk[3];
            ijk[d] = pos;
            ijk[(d == 0) ? 1 : 0] = ia;
            ijk[(d == 2) ? 1 : 2] = ib;
            return eid(ijk[0], ijk[1], ijk[2]);
          };
          Face face;
          if (s > 0 && s < m[d]) {
            face.left = slab_eid(s - 1);
            face.right = slab_eid(s);
            face.side_l = 2 * d + 1;
            face.side_r = 2 * d;
            face.kind = BcKind::interior;
          } else if (s == m[d]) {
            continue;  // handled at s == 0 (periodic) or as boundary below
          } else {     // s == 0
            if (periodic[d]) {
              face.left = slab_eid(m[d] - 1);
              face.right = slab_eid(0);
              face.side_l = 2 * d + 1;
              face.side_r = 2 * d;
              face.kind = BcKind::periodic;
            } else {
              continue;
            }
          }
          mesh.faces.push_back(face);
        }
    if (!periodic[d]) {
      for (int ib = 0; ib < sb; ++ib)
        for (int ia = 0; ia < sa; ++ia) {
          auto slab_eid = [&](int pos) {
            int ijk[3];
            ijk[d] = pos;
            ijk[(d == 0) ? 1 : 0] = ia;
            ijk[(d == 2) ? 1 : 2] = ib;
            return eid(ijk[0], ijk[1], ijk[2]);
          };
          for (int high = 0; high < 2; ++high) {
            Face face;
            face.left = slab_eid(high ? m[d] - 1 : 0);
            face.side_l = 2 * d + high;
            face.kind = tags[2 * d + high];
            if (face.kind == BcKind::interior || face.kind == BcKind::periodic)
              throw Error("build_cartesian: non-periodic boundary needs a physical tag");
            mesh.faces.push_back(face);
          }
        }
    }
  }
  for (const auto &face : mesh.faces)
    if (face.right < 0)
      cm.boundary.push_back(
          {sorted_key(side_corners(cm.hexes[face.left], face.side_l)), face.kind});

  fill_face_geometry(mesh);
  mesh.finalize();
  return mesh;
}

Mesh apply_mapping(const Mesh &mesh, const std::function<Vec3(const Vec3 &)> &mapping) {
  Mesh out = mesh;
  out.corners.reset();  // curved geometry has no corner representation
  for (int e = 0; e < out.n_elements(); ++e) {
    auto &geom = out.elems[e];
    for (auto &x : geom.x) x = mapping(x);
    compute_metrics_curl_form(geom, out.bases);
    for (int q = 0; q < static_cast<int>(geom.jac.size()); ++q)
      if (!(geom.jac[q] > 0.0))
        throw Error("apply_mapping: non-positive Jacobian in element " + std::to_string(e) +
                    " at node " + std::to_string(q));
  }
  fill_face_geometry(out);
  out.finalize();
  return out;
}

Mesh read_mesh_file(const std::string &path, const std::array<int, 3> &degrees) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file: " + path);
  std::string word;
  int version = 0;
  in >> word >> version;
  if (word != "ESPDG-MESH" || version != 1) throw Error("bad mesh header in " + path);

  Mesh mesh;
  for (int d = 0; d < 3; ++d) {
    if (degrees[d] < 1) throw Error("read_mesh_file: degrees must be >= 1");
    mesh.bases[d] = std::make_shared<NodalBasis>(degrees[d]);
  }
  mesh.corners = std::make_shared<CornerMesh>();
  auto &cm = *mesh.corners;

  int count = 0;
  in >> word >> count;
  if (word != "nodes" || count < 8) throw Error("mesh file: bad nodes section");
  cm.nodes.resize(count);
  for (auto &x : cm.nodes) in >> x.x >> x.y >> x.z;

  in >> word >> count;
  if (word != "hexes" || count < 1) throw Error("mesh file: bad hexes section");
  cm.hexes.resize(count);
  for (auto &hx : cm.hexes)
    for (auto &id : hx) {
      in >> id;
      if (id < 0 || id >= static_cast<int>(cm.nodes.size()))
        throw Error("mesh file: hex references unknown node");
    }

  in >> word >> count;
  if (word != "boundary") throw Error("mesh file: bad boundary section");
  cm.boundary.resize(count);
  for (auto &bnd : cm.boundary) {
    for (auto &id : bnd.first) in >> id;
    std::string tag;
    in >> tag;
    bnd.first = sorted_key(bnd.first);
    bnd.second = bc_kind_from_string(tag);
  }
  if (!in) throw Error("mesh file: truncated or malformed: " + path);

  mesh.elems.resize(cm.hexes.size());
  for (size_t e = 0; e < cm.hexes.size(); ++e) {
    std::array<Vec3, 8> corners;
    for (int c = 0; c < 8; ++c) corners[c] = cm.nodes[cm.hexes[e][c]];
    trilinear_element(mesh.elems[e], corners, mesh.bases);
    compute_metrics_curl_form(mesh.elems[e], mesh.bases);
    for (double j : mesh.elems[e].jac)
      if (!(j > 0.0)) throw Error("mesh file: inverted element " + std::to_string(e));
  }

  // Pair sides by sorted corner quadruples.
  std::map<std::array<int, 4>, std::pair<int, int>> open;
  for (int e = 0; e < static_cast<int>(cm.hexes.size()); ++e)
    for (int s = 0; s < 6; ++s) {
      const auto key = sorted_key(side_corners(cm.hexes[e], s));
      auto it = open.find(key);
      if (it == open.end()) {
        open[key] = {e, s};
        continue;
      }
      Face face;
      face.left = it->second.first;
      face.side_l = it->second.second;
      face.right = e;
      face.side_r = s;
      face.kind = BcKind::interior;
      const auto lc = side_corners(cm.hexes[face.left], face.side_l);
      const auto rc = side_corners(cm.hexes[face.right], face.side_r);
      face.orient = -1;
      for (int o = 0; o < 8; ++o) {
        bool ok = true;
        for (int q = 0; q < 2 && ok; ++q)
          for (int p = 0; p < 2 && ok; ++p) {
            int u, v;
            map_ab(o, p, q, 1, 1, u, v);
            ok = lc[q * 2 + p] == rc[v * 2 + u];
          }
        if (ok) {
          face.orient = o;
          break;
        }
      }
      if (face.orient < 0) throw Error("mesh file: cannot orient shared face");
      mesh.faces.push_back(face);
      open.erase(it);
    }

  std::map<std::array<int, 4>, BcKind> tags;
  for (auto &bnd : cm.boundary) tags[bnd.first] = bnd.second;
  for (auto &[key, es] : open) {
    auto it = tags.find(key);
    if (it == tags.end())
      throw Error("mesh file: untagged boundary face on element " + std::to_string(es.first));
    Face face;
    face.left = es.first;
    face.side_l = es.second;
    face.kind = it->second;
    if (face.kind == BcKind::interior || face.kind == BcKind::periodic)
      throw Error("mesh file: boundary tag must be physical");
    mesh.faces.push_back(face);
  }

  fill_face_geometry(mesh);
  mesh.finalize();
  return mesh;
}

void write_mesh_file(const Mesh &mesh, const std::string &path) {
  if (!mesh.corners) throw Error("write_mesh_file: mesh has no corner representation");
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file: " + path);
  out.precision(17);
  const auto &cm = *mesh.corners;
  out << "ESPDG-MESH 1\n";
  out << "nodes " << cm.nodes.size() << "\n";
  for (const auto &x : cm.nodes) out << x.x << " " << x.y << " " << x.z << "\n";
  out << "hexes " << cm.hexes.size() << "\n";
  for (const auto &hx : cm.hexes) {
    for (int c = 0; c < 8; ++c) out << hx[c] << (c == 7 ? '\n' : ' ');
  }
  out << "boundary " << cm.boundary.size() << "\n";
  for (const auto &bnd : cm.boundary) {
    for (int id : bnd.first) out << id << " ";
    out << to_string(bnd.second) << "\n";
  }
}

double metric_identity_residual(const Mesh &mesh) {
  double worst = 0.0;
  const int n1 = mesh.bases[0]->count(), n2 = mesh.bases[1]->count(), n3 = mesh.bases[2]->count();
  for (const auto &geom : mesh.elems) {
    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i)
          for (int n = 0; n < 3; ++n) {
            double r = 0.0;
            for (int p = 0; p < n1; ++p)
              r += mesh.bases[0]->d(i, p) * geom.ja[mesh.node_index(p, j, k)][0][n];
            for (int p = 0; p < n2; ++p)
              r += mesh.bases[1]->d(j, p) * geom.ja[mesh.node_index(i, p, k)][1][n];
            for (int p = 0; p < n3; ++p)
              r += mesh.bases[2]->d(k, p) * geom.ja[mesh.node_index(i, j, p)][2][n];
            worst = std::max(worst, std::abs(r));
          }
  }
  return worst;
}

double face_watertightness(const Mesh &mesh) {
  double worst = 0.0;
  for (const auto &face : mesh.faces) {
    if (face.right < 0) continue;
    const auto &xl = mesh.elems[face.left].x;
    const auto &xr = mesh.elems[face.right].x;
    const Vec3 shift = xr[face.idx_r[0]] - xl[face.idx_l[0]];
    if (face.kind != BcKind::periodic) worst = std::max(worst, norm(shift));
    for (int q = 1; q < face.nfp(); ++q) {
      const Vec3 d = xr[face.idx_r[q]] - xl[face.idx_l[q]] - shift;
      worst = std::max(worst, norm(d));
    }
  }
  return worst;
}

}  // namespace espdg
