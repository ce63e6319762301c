#include "espdg/fluxes.hpp"

namespace espdg {

StarRegion ers_star(const State &qn_l, const State &qn_r, const PhysParams &par) {
  const RotatedPrim l = face_prim(qn_l, par);
  const RotatedPrim r = face_prim(qn_r, par);
  const double rc2 = par.rho0c0sqr();

  StarRegion s;
  s.a_l = std::sqrt(l.un * l.un + 4.0 * rc2 / l.rho);
  s.a_r = std::sqrt(r.un * r.un + 4.0 * rc2 / r.rho);
  s.lam_l_plus = 0.5 * (l.un + s.a_l);
  s.lam_l_minus = 0.5 * (l.un - s.a_l);
  s.lam_r_plus = 0.5 * (r.un + s.a_r);
  s.lam_r_minus = 0.5 * (r.un - s.a_r);

  const double den = l.rho * s.lam_l_plus - r.rho * s.lam_r_minus;
  if (!(den > 0.0)) throw Error("ers_star: non-positive wave-speed denominator");

  s.un_star = (l.p - r.p + l.rho * l.un * s.lam_l_plus - r.rho * r.un * s.lam_r_minus) / den;
  s.p_star = l.p + l.rho * s.lam_l_plus * (l.un - s.un_star);
  s.rho_l_star = l.rho * s.lam_l_plus / (s.un_star - s.lam_l_minus);
  s.rho_r_star = r.rho * s.lam_r_minus / (s.un_star - s.lam_r_plus);
  // Side selection; the tie U_n* = 0 takes the left values.
  if (s.un_star >= 0.0) {
    s.rho_star = s.rho_l_star;
    s.vt1_star = l.vt1;
    s.vt2_star = l.vt2;
  } else {
    s.rho_star = s.rho_r_star;
    s.vt1_star = r.vt1;
    s.vt2_star = r.vt2;
  }
  return s;
}

InviscidFaceFlux central_inviscid(const State &qn_l, const State &qn_r, double mu_l, double mu_r,
                                  const PhysParams &par) {
  const RotatedPrim l = face_prim(qn_l, par);
  const RotatedPrim r = face_prim(qn_r, par);
  const double rc2 = par.rho0c0sqr();
  const double avg_un = 0.5 * (l.un + r.un);
  const double avg_vt1 = 0.5 * (l.vt1 + r.vt1);
  const double avg_vt2 = 0.5 * (l.vt2 + r.vt2);
  const double avg_mu = 0.5 * (mu_l + mu_r);

  InviscidFaceFlux out;
  out.fstar = 0.5 * (rotated_inviscid_flux(l) + rotated_inviscid_flux(r));

  out.diamond_l = {0.0, 0.5 * l.rho * l.un * avg_un + l.c * avg_mu, 0.5 * l.rho * l.un * avg_vt1,
                   0.5 * l.rho * l.un * avg_vt2, rc2 * avg_un};
  out.diamond_r = {0.0, 0.5 * r.rho * r.un * avg_un + r.c * avg_mu, 0.5 * r.rho * r.un * avg_vt1,
                   0.5 * r.rho * r.un * avg_vt2, rc2 * avg_un};
  return out;
}

InviscidFaceFlux ers_fluxes(const State &qn_l, const State &qn_r, double mu_l, double mu_r,
                            const StarRegion &s, const PhysParams &par) {
  const RotatedPrim l = face_prim(qn_l, par);
  const RotatedPrim r = face_prim(qn_r, par);
  const double rc2 = par.rho0c0sqr();
  const double avg_mu = 0.5 * (mu_l + mu_r);
  const double mom_star = s.rho_star * s.un_star;

  InviscidFaceFlux out;
  out.fstar = {0.5 * (l.c * l.un + r.c * r.un), 0.5 * mom_star * s.un_star + s.p_star,
               0.5 * mom_star * s.vt1_star, 0.5 * mom_star * s.vt2_star, 0.0};

  auto diamond = [&](const RotatedPrim &v) -> State {
    return {0.0,
            0.5 * mom_star * s.un_star + 0.5 * v.rho * v.un * v.un - 0.5 * mom_star * v.un +
                v.c * avg_mu,
            0.5 * mom_star * s.vt1_star + 0.5 * v.rho * v.un * v.vt1 - 0.5 * mom_star * v.vt1,
            0.5 * mom_star * s.vt2_star + 0.5 * v.rho * v.un * v.vt2 - 0.5 * mom_star * v.vt2,
            rc2 * s.un_star};
  };
  out.diamond_l = diamond(l);
  out.diamond_r = diamond(r);
  return out;
}

double ers_interface_dissipation(const State &qn_l, const State &qn_r, const StarRegion &s,
                                 const PhysParams &par) {
  const RotatedPrim l = face_prim(qn_l, par);
  const RotatedPrim r = face_prim(qn_r, par);
  const double j_un = r.un - l.un;
  const double j_vt1 = r.vt1 - l.vt1;
  const double j_vt2 = r.vt2 - l.vt2;
  const double j_p = r.p - l.p;
  const double j_vtot2 = (r.un * r.un + r.vt1 * r.vt1 + r.vt2 * r.vt2) -
                         (l.un * l.un + l.vt1 * l.vt1 + l.vt2 * l.vt2);
  const double j_pun = r.p * r.un - l.p * l.un;
  return 0.5 * s.rho_star * j_vtot2 * s.un_star -
         s.rho_star * s.un_star * (s.un_star * j_un + s.vt1_star * j_vt1 + s.vt2_star * j_vt2) -
         s.p_star * j_un - j_p * s.un_star + j_pun;
}

State wall_ghost(const State &qn) { return {qn[0], -qn[1], qn[2], qn[3], qn[4]}; }

State inflow_ghost(const State &qn, const InflowData &data, const FaceFrame &fr,
                   const PhysParams &par) {
  const double sr = std::sqrt(density(data.c, par));
  return {data.c, sr * dot(data.u, fr.n), sr * dot(data.u, fr.t1), sr * dot(data.u, fr.t2), qn[4]};
}

State outflow_ghost(const State &qn) { return {qn[0], qn[1], qn[2], qn[3], 0.0}; }

}  // namespace espdg
