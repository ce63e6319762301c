#pragma once

#include "espdg/types.hpp"

namespace espdg {

/// Physical constants of the two-phase model.
struct PhysParams {
  double rho1 = 1.0;    // kg/m^3, fluid 1
  double rho2 = 1.0;    // kg/m^3, fluid 2
  double eta1 = 1.0;    // Pa s
  double eta2 = 1.0;    // Pa s
  double sigma = 1.0;   // N/m, interface tension
  double eps = 0.1;     // m, interface width
  double t_ch = 1.0;    // s, chemical characteristic time
  double c0_sqr = 1.0;  // (m/s)^2, artificial sound speed squared
  Vec3 gravity{0.0, 0.0, 0.0};
  double theta_w = M_PI / 2.0;  // wall contact angle, radians
  double kappa_beta = 0.0;      // interface stabilization switch {0,1}

  double mobility() const { return eps / (sigma * t_ch); }
  double rho0() const { return rho1 > rho2 ? rho1 : rho2; }
  double rho0c0sqr() const { return rho0() * c0_sqr; }

  void validate() const;
};

/// Concentration cutoff used for density and viscosity evaluations.
inline double cutoff(double c) { return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c); }

inline double density(double c, const PhysParams &p) {
  const double ch = cutoff(c);
  return p.rho1 * ch + p.rho2 * (1.0 - ch);
}

// The cutoff is applied here as well so eta stays positive for
// out-of-range concentrations (the entropy proofs need eta > 0).
inline double viscosity(double c, const PhysParams &p) {
  const double ch = cutoff(c);
  return p.eta1 * ch + p.eta2 * (1.0 - ch);
}

/// Double-well chemical free energy f0 = (12 sigma / eps) c^2 (1-c)^2.
inline double chemical_free_energy(double c, const PhysParams &p) {
  const double a = 12.0 * p.sigma / p.eps;
  const double t = c * (1.0 - c);
  return a * t * t;
}

inline double chemical_free_energy_prime(double c, const PhysParams &p) {
  const double a = 12.0 * p.sigma / p.eps;
  return a * (2.0 * c - 6.0 * c * c + 4.0 * c * c * c);
}

/// cos(theta_w), snapped so a 90 degree angle gives exactly zero wall energy.
inline double wall_angle_cos(const PhysParams &p) {
  const double cw = std::cos(p.theta_w);
  return std::abs(cw) < 1e-15 ? 0.0 : cw;
}

/// Wall free energy controlling the contact angle; identically zero at 90 deg.
inline double wall_free_energy(double c, const PhysParams &p) {
  return 0.5 * p.sigma * wall_angle_cos(p) * (2.0 * c - 1.0) * (1.0 + 2.0 * c - 2.0 * c * c);
}

inline double wall_free_energy_prime(double c, const PhysParams &p) {
  return 6.0 * p.sigma * wall_angle_cos(p) * c * (1.0 - c);
}

/// Velocity recovered from the sqrt(rho)-scaled momentum with the cutoff density.
inline Vec3 velocity(const State &q, const PhysParams &p) {
  const double sr = std::sqrt(density(q[0], p));
  return {q[1] / sr, q[2] / sr, q[3] / sr};
}

/// Entropy variables w = (mu, u, v, w, p / (rho0 c0^2)).
inline State entropy_vars(const State &q, double mu, const PhysParams &p) {
  const Vec3 u = velocity(q, p);
  return {mu, u.x, u.y, u.z, q[4] / p.rho0c0sqr()};
}

/// Inviscid flux block f_e; the momentum rows carry (1/2) rho u u + p I from
/// the skew-symmetric splitting.
BlockState inviscid_flux(const State &q, const PhysParams &p);

/// Non-conservative coefficient blocks phi_m, m = 1..5.
std::array<BlockState, 5> noncons_coefficients(const State &q, const PhysParams &p);

/// Viscous flux block from the gradient of the entropy variables.
/// grad_w[d][m] = d w_m / d x_d.
BlockState viscous_flux(const std::array<State, 3> &grad_w, double c, const PhysParams &p);

/// Local x-directed sum of Phi_m w_m (used with rotational invariance).
State noncons_normal_flux(double c, double rho, const Vec3 &u_rot, double mu, const PhysParams &p);

/// Mathematical entropy density and its parts (free energy, kinetic, AC).
struct EntropyParts {
  double total = 0.0;
  double free_energy = 0.0;
  double kinetic = 0.0;
  double acoustic = 0.0;
};
EntropyParts entropy_density(const State &q, const Vec3 &grad_c, const PhysParams &p);

/// Gravity source s = (0, rho g, 0).
inline State source(const State &q, const PhysParams &p) {
  const double rho = density(q[0], p);
  return {0.0, rho * p.gravity.x, rho * p.gravity.y, rho * p.gravity.z, 0.0};
}

}  // namespace espdg
