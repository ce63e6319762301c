#pragma once

#include "espdg/physics.hpp"
#include "espdg/types.hpp"

namespace espdg {

enum class FluxMode { central, ers };

struct FaceFrame {
  Vec3 n, t1, t2;
};

/// Rotation T q: momentum components into (normal, tangent1, tangent2).
inline State rotate_to_face(const State &q, const FaceFrame &fr) {
  const Vec3 m{q[1], q[2], q[3]};
  return {q[0], dot(m, fr.n), dot(m, fr.t1), dot(m, fr.t2), q[4]};
}

/// Back rotation T^T f.
inline State rotate_back(const State &f, const FaceFrame &fr) {
  const Vec3 m = f[1] * fr.n + f[2] * fr.t1 + f[3] * fr.t2;
  return {f[0], m.x, m.y, m.z, f[4]};
}

/// Primitive face-normal quantities derived from a rotated state.
struct RotatedPrim {
  double c, rho, un, vt1, vt2, p;
};

inline RotatedPrim face_prim(const State &qn, const PhysParams &par) {
  RotatedPrim v;
  v.c = qn[0];
  v.rho = density(qn[0], par);
  const double sr = std::sqrt(v.rho);
  v.un = qn[1] / sr;
  v.vt1 = qn[2] / sr;
  v.vt2 = qn[3] / sr;
  v.p = qn[4];
  return v;
}

/// Local rotated inviscid normal flux F_e(Q_n).
inline State rotated_inviscid_flux(const RotatedPrim &v) {
  return {v.c * v.un, 0.5 * v.rho * v.un * v.un + v.p, 0.5 * v.rho * v.un * v.vt1,
          0.5 * v.rho * v.un * v.vt2, 0.0};
}

/// Local rotated sum of Phi_m W_m along the normal.
inline State rotated_noncons_flux(const RotatedPrim &v, double mu, const PhysParams &par) {
  return {0.0, 0.5 * v.rho * v.un * v.un + mu * v.c, 0.5 * v.rho * v.un * v.vt1,
          0.5 * v.rho * v.un * v.vt2, par.rho0c0sqr() * v.un};
}

/// Exact Riemann solver star region for the artificial-compressibility system.
struct StarRegion {
  double un_star = 0.0;
  double p_star = 0.0;
  double rho_star = 0.0;    // side-selected
  double rho_l_star = 0.0;
  double rho_r_star = 0.0;
  double vt1_star = 0.0;    // side-selected
  double vt2_star = 0.0;
  double lam_l_plus = 0.0, lam_l_minus = 0.0;
  double lam_r_plus = 0.0, lam_r_minus = 0.0;
  double a_l = 0.0, a_r = 0.0;
};

StarRegion ers_star(const State &qn_l, const State &qn_r, const PhysParams &par);

/// Numerical flux plus the two-valued diamond fluxes, all in the rotated
/// frame along the face normal.
struct InviscidFaceFlux {
  State fstar{};
  State diamond_l{};
  State diamond_r{};
};

InviscidFaceFlux central_inviscid(const State &qn_l, const State &qn_r, double mu_l, double mu_r,
                                  const PhysParams &par);

InviscidFaceFlux ers_fluxes(const State &qn_l, const State &qn_r, double mu_l, double mu_r,
                            const StarRegion &star, const PhysParams &par);

inline InviscidFaceFlux inviscid_face_flux(FluxMode mode, const State &qn_l, const State &qn_r,
                                           double mu_l, double mu_r, const PhysParams &par) {
  if (mode == FluxMode::central) return central_inviscid(qn_l, qn_r, mu_l, mu_r, par);
  return ers_fluxes(qn_l, qn_r, mu_l, mu_r, ers_star(qn_l, qn_r, par), par);
}

/// BR1 star values for the viscous system; all normal components taken along
/// the left outward normal, jumps are right minus left.
struct ViscousFaceFlux {
  State wstar{};
  State fvn_star{};
};

inline ViscousFaceFlux br1_viscous(const State &w_l, const State &w_r, const State &fvn_l,
                                   const State &fvn_r, double beta) {
  ViscousFaceFlux out;
  for (int m = 0; m < 5; ++m) {
    out.wstar[m] = 0.5 * (w_l[m] + w_r[m]);
    out.fvn_star[m] = 0.5 * (fvn_l[m] + fvn_r[m]);
  }
  out.fvn_star[0] += beta * (w_r[0] - w_l[0]);
  return out;
}

struct ConcentrationFaceFlux {
  double cstar = 0.0;
  double gcn_star = 0.0;
};

inline ConcentrationFaceFlux br1_concentration(double c_l, double c_r, double gcn_l, double gcn_r,
                                               double beta) {
  return {0.5 * (c_l + c_r), 0.5 * (gcn_l + gcn_r) + beta * (c_r - c_l)};
}

/// Entropy production of the exact Riemann solver interface (>= 0).
double ers_interface_dissipation(const State &qn_l, const State &qn_r, const StarRegion &star,
                                 const PhysParams &par);

/// Prescribed inflow data at a boundary point.
struct InflowData {
  double c = 0.0;
  Vec3 u{};
};

/// Rotated ghost states for the inviscid boundary treatment.
State wall_ghost(const State &qn);                 // mirrored normal momentum
State inflow_ghost(const State &qn, const InflowData &data, const FaceFrame &fr,
                   const PhysParams &par);         // prescribed state, interior pressure
State outflow_ghost(const State &qn);              // interior state, zero pressure

}  // namespace espdg
