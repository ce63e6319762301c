#include "espdg/physics.hpp"

namespace espdg {

void PhysParams::validate() const {
  if (rho1 <= 0.0 || rho2 <= 0.0) throw Error("PhysParams: densities must be positive");
  if (eta1 <= 0.0 || eta2 <= 0.0) throw Error("PhysParams: viscosities must be positive");
  if (sigma <= 0.0) throw Error("PhysParams: sigma must be positive");
  if (eps <= 0.0) throw Error("PhysParams: eps must be positive");
  if (t_ch <= 0.0) throw Error("PhysParams: t_ch must be positive");
  if (c0_sqr <= 0.0) throw Error("PhysParams: c0_sqr must be positive");
}

BlockState inviscid_flux(const State &q, const PhysParams &p) {
  const double c = q[0];
  const double rho = density(c, p);
  const Vec3 u = velocity(q, p);
  const double pr = q[4];

  BlockState f;
  for (int d = 0; d < 3; ++d) {
    State &fd = f.slot(d);
    const double ud = u[d];
    fd[0] = c * ud;
    fd[1] = 0.5 * rho * ud * u.x;
    fd[2] = 0.5 * rho * ud * u.y;
    fd[3] = 0.5 * rho * ud * u.z;
    fd[1 + d] += pr;
    fd[4] = 0.0;
  }
  return f;
}

std::array<BlockState, 5> noncons_coefficients(const State &q, const PhysParams &p) {
  const double c = q[0];
  const double rho = density(c, p);
  const Vec3 u = velocity(q, p);
  const double rc2 = p.rho0c0sqr();

  std::array<BlockState, 5> phi{};
  // phi_1: concentration gradient coefficient c e_d in the momentum rows.
  for (int d = 0; d < 3; ++d) phi[0].slot(d)[1 + d] = c;
  // phi_2..4: (1/2) rho u in the own momentum row plus rho0 c0^2 e_m in p row.
  for (int m = 1; m <= 3; ++m) {
    for (int d = 0; d < 3; ++d) phi[m].slot(d)[m] = 0.5 * rho * u[d];
    phi[m].slot(m - 1)[4] = rc2;
  }
  // phi_5 = 0.
  return phi;
}

BlockState viscous_flux(const std::array<State, 3> &grad_w, double c, const PhysParams &p) {
  const double m0 = p.mobility();
  const double eta = viscosity(c, p);

  // Strain tensor from the velocity rows of grad_w.
  double s[3][3];
  for (int d = 0; d < 3; ++d)
    for (int e = 0; e < 3; ++e) s[d][e] = 0.5 * (grad_w[d][1 + e] + grad_w[e][1 + d]);

  BlockState f;
  for (int d = 0; d < 3; ++d) {
    State &fd = f.slot(d);
    fd[0] = m0 * grad_w[d][0];
    for (int e = 0; e < 3; ++e) fd[1 + e] = 2.0 * eta * s[e][d];
    fd[4] = 0.0;
  }
  return f;
}

State noncons_normal_flux(double c, double rho, const Vec3 &u_rot, double mu, const PhysParams &p) {
  const double un = u_rot.x;
  return {0.0, 0.5 * rho * un * un + mu * c, 0.5 * rho * un * u_rot.y, 0.5 * rho * un * u_rot.z,
          p.rho0c0sqr() * un};
}

EntropyParts entropy_density(const State &q, const Vec3 &grad_c, const PhysParams &p) {
  EntropyParts e;
  e.free_energy = chemical_free_energy(q[0], p) + 0.75 * p.sigma * p.eps * dot(grad_c, grad_c);
  // With rho = rho(c-hat) used consistently, (1/2) rho v_tot^2 is exactly
  // half the squared sqrt(rho)-momentum.
  e.kinetic = 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  e.acoustic = q[4] * q[4] / (2.0 * p.rho0c0sqr());
  e.total = e.free_energy + e.kinetic + e.acoustic;
  return e;
}

}  // namespace espdg
