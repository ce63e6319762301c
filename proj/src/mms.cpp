// Manufactured-solution fields and sources. The long expressions are
// generated by scripts/generate_mms.py; do not edit them by hand.

#include "espdg/mms.hpp"

#include <cmath>

namespace espdg::mms {

State exact_state(const Vec3 &xv, double t, const PhysParams &par) {
  const double x = xv.x, y = xv.y;
  const double c = 0.5 * (1.0 + std::cos(M_PI * x) * std::cos(M_PI * y) * std::sin(t));
  const double u = 2.0 * std::sin(M_PI * x) * std::cos(M_PI * y) * std::sin(t);
  const double v = -2.0 * std::cos(M_PI * x) * std::sin(M_PI * y) * std::sin(t);
  const double p = 2.0 * std::sin(M_PI * x) * std::sin(M_PI * y) * std::cos(t);
  const double sr = std::sqrt(par.rho1 * c + par.rho2 * (1.0 - c));
  return {c, sr * u, sr * v, 0.0, p};
}

State exact_rate(const Vec3 &xv, double t, const PhysParams &par) {
  const double x = xv.x, y = xv.y;
  const double rho1 = par.rho1, rho2 = par.rho2;
  State rate{};
  rate[0] = (1.0 / 2.0) * std::cos(t) * std::cos(M_PI * x) * std::cos(M_PI * y);
  rate[1] = (1.0 / 2.0) * M_SQRT2 *
            (3 * rho1 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) + 2 * rho1 -
             3 * rho2 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) + 2 * rho2) *
            std::sin(M_PI * x) * std::cos(t) * std::cos(M_PI * y) /
            std::sqrt(rho1 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) + rho1 -
                      rho2 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) + rho2);
  rate[2] = (1.0 / 2.0) * M_SQRT2 *
            (-3 * rho1 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) - 2 * rho1 +
             3 * rho2 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) - 2 * rho2) *
            std::sin(M_PI * y) * std::cos(t) * std::cos(M_PI * x) /
            std::sqrt(rho1 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) + rho1 -
                      rho2 * std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) + rho2);
  rate[3] = 0.0;
  rate[4] = -2 * std::sin(t) * std::sin(M_PI * x) * std::sin(M_PI * y);
  return rate;
}

double exact_mu(const Vec3 &xv, double t, const PhysParams &par) {
  const double x = xv.x, y = xv.y;
  const double sigma = par.sigma, eps = par.eps;
  return (3.0 / 2.0) * sigma *
         (std::pow(M_PI, 2) * std::pow(eps, 2) +
          4 * std::pow(std::sin(t), 2) * std::pow(std::cos(M_PI * x), 2) *
              std::pow(std::cos(M_PI * y), 2) -
          4) *
         std::sin(t) * std::cos(M_PI * x) * std::cos(M_PI * y) / eps;
}

State source(const Vec3 &xv, double t, const PhysParams &par) {
  const double x = xv.x, y = xv.y;
  const double rho1 = par.rho1, rho2 = par.rho2;
  const double eta1 = par.eta1, eta2 = par.eta2;
  const double sigma = par.sigma, eps = par.eps;
  const double m0 = par.mobility();
  const double rc2 = par.rho0c0sqr();
  (void)rc2;  // the manufactured velocity is divergence free

  State src{};
  src[0] =
      3 * std::pow(M_PI, 4) * eps * m0 * sigma * std::sin(t) * std::cos(M_PI * x) *
          std::cos(M_PI * y) -
      M_PI * std::pow(std::sin(t), 2) * std::pow(std::sin(M_PI * x), 2) *
          std::pow(std::cos(M_PI * y), 2) +
      M_PI * std::pow(std::sin(t), 2) * std::pow(std::sin(M_PI * y), 2) *
          std::pow(std::cos(M_PI * x), 2) +
      (1.0 / 2.0) * std::cos(t) * std::cos(M_PI * x) * std::cos(M_PI * y) -
      36 * std::pow(M_PI, 2) * m0 * sigma * std::pow(std::sin(t), 3) *
          std::pow(std::sin(M_PI * x), 2) * std::cos(M_PI * x) *
          std::pow(std::cos(M_PI * y), 3) / eps -
      36 * std::pow(M_PI, 2) * m0 * sigma * std::pow(std::sin(t), 3) *
          std::pow(std::sin(M_PI * y), 2) * std::pow(std::cos(M_PI * x), 3) *
          std::cos(M_PI * y) / eps +
      36 * std::pow(M_PI, 2) * m0 * sigma * std::pow(std::sin(t), 3) *
          std::pow(std::cos(M_PI * x), 3) * std::pow(std::cos(M_PI * y), 3) / eps -
      12 * std::pow(M_PI, 2) * m0 * sigma * std::sin(t) * std::cos(M_PI * x) *
          std::cos(M_PI * y) / eps;

  src[1] =
      (1.0 / 4.0) *
      (-3 * std::pow(M_PI, 3) * std::pow(eps, 2) * sigma * std::pow(std::sin(t), 2) *
           std::sin(M_PI * x) * std::cos(M_PI * x) * std::pow(std::cos(M_PI * y), 2) -
       3 * std::pow(M_PI, 3) * std::pow(eps, 2) * sigma * std::sin(t) * std::sin(M_PI * x) *
           std::cos(M_PI * y) +
       16 * std::pow(M_PI, 2) * eps * eta1 * std::pow(std::sin(t), 2) * std::sin(M_PI * x) *
           std::cos(M_PI * x) * std::pow(std::cos(M_PI * y), 2) +
       8 * std::pow(M_PI, 2) * eps * eta1 * std::sin(t) * std::sin(M_PI * x) *
           std::cos(M_PI * y) -
       16 * std::pow(M_PI, 2) * eps * eta2 * std::pow(std::sin(t), 2) * std::sin(M_PI * x) *
           std::cos(M_PI * x) * std::pow(std::cos(M_PI * y), 2) +
       8 * std::pow(M_PI, 2) * eps * eta2 * std::sin(t) * std::sin(M_PI * x) *
           std::cos(M_PI * y) -
       4 * M_PI * eps * rho1 * std::pow(std::sin(t), 3) * std::pow(std::sin(M_PI * x), 3) *
           std::pow(std::cos(M_PI * y), 3) +
       12 * M_PI * eps * rho1 * std::pow(std::sin(t), 3) * std::sin(M_PI * x) *
           std::pow(std::sin(M_PI * y), 2) * std::pow(std::cos(M_PI * x), 2) *
           std::cos(M_PI * y) +
       8 * M_PI * eps * rho1 * std::pow(std::sin(t), 3) * std::sin(M_PI * x) *
           std::pow(std::cos(M_PI * x), 2) * std::pow(std::cos(M_PI * y), 3) +
       8 * M_PI * eps * rho1 * std::pow(std::sin(t), 2) * std::sin(M_PI * x) *
           std::pow(std::sin(M_PI * y), 2) * std::cos(M_PI * x) +
       8 * M_PI * eps * rho1 * std::pow(std::sin(t), 2) * std::sin(M_PI * x) *
           std::cos(M_PI * x) * std::pow(std::cos(M_PI * y), 2) +
       6 * eps * rho1 * std::sin(t) * std::sin(M_PI * x) * std::cos(t) * std::cos(M_PI * x) *
           std::pow(std::cos(M_PI * y), 2) +
       4 * eps * rho1 * std::sin(M_PI * x) * std::cos(t) * std::cos(M_PI * y) +
       4 * M_PI * eps * rho2 * std::pow(std::sin(t), 3) * std::pow(std::sin(M_PI * x), 3) *
           std::pow(std::cos(M_PI * y), 3) -
       12 * M_PI * eps * rho2 * std::pow(std::sin(t), 3) * std::sin(M_PI * x) *
           std::pow(std::sin(M_PI * y), 2) * std::pow(std::cos(M_PI * x), 2) *
           std::cos(M_PI * y) -
       8 * M_PI * eps * rho2 * std::pow(std::sin(t), 3) * std::sin(M_PI * x) *
           std::pow(std::cos(M_PI * x), 2) * std::pow(std::cos(M_PI * y), 3) +
       8 * M_PI * eps * rho2 * std::pow(std::sin(t), 2) * std::sin(M_PI * x) *
           std::pow(std::sin(M_PI * y), 2) * std::cos(M_PI * x) +
       8 * M_PI * eps * rho2 * std::pow(std::sin(t), 2) * std::sin(M_PI * x) *
           std::cos(M_PI * x) * std::pow(std::cos(M_PI * y), 2) -
       6 * eps * rho2 * std::sin(t) * std::sin(M_PI * x) * std::cos(t) * std::cos(M_PI * x) *
           std::pow(std::cos(M_PI * y), 2) +
       4 * eps * rho2 * std::sin(M_PI * x) * std::cos(t) * std::cos(M_PI * y) +
       8 * M_PI * eps * std::sin(M_PI * y) * std::cos(t) * std::cos(M_PI * x) -
       36 * M_PI * sigma * std::pow(std::sin(t), 4) * std::sin(M_PI * x) *
           std::pow(std::cos(M_PI * x), 3) * std::pow(std::cos(M_PI * y), 4) -
       36 * M_PI * sigma * std::pow(std::sin(t), 3) * std::sin(M_PI * x) *
           std::pow(std::cos(M_PI * x), 2) * std::pow(std::cos(M_PI * y), 3) +
       12 * M_PI * sigma * std::pow(std::sin(t), 2) * std::sin(M_PI * x) * std::cos(M_PI * x) *
           std::pow(std::cos(M_PI * y), 2) +
       12 * M_PI * sigma * std::sin(t) * std::sin(M_PI * x) * std::cos(M_PI * y)) /
      eps;

  src[2] =
      (1.0 / 4.0) *
      (-3 * std::pow(M_PI, 3) * std::pow(eps, 2) * sigma * std::pow(std::sin(t), 2) *
           std::sin(M_PI * y) * std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) -
       3 * std::pow(M_PI, 3) * std::pow(eps, 2) * sigma * std::sin(t) * std::sin(M_PI * y) *
           std::cos(M_PI * x) -
       16 * std::pow(M_PI, 2) * eps * eta1 * std::pow(std::sin(t), 2) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) -
       8 * std::pow(M_PI, 2) * eps * eta1 * std::sin(t) * std::sin(M_PI * y) *
           std::cos(M_PI * x) +
       16 * std::pow(M_PI, 2) * eps * eta2 * std::pow(std::sin(t), 2) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) -
       8 * std::pow(M_PI, 2) * eps * eta2 * std::sin(t) * std::sin(M_PI * y) *
           std::cos(M_PI * x) +
       12 * M_PI * eps * rho1 * std::pow(std::sin(t), 3) * std::pow(std::sin(M_PI * x), 2) *
           std::sin(M_PI * y) * std::cos(M_PI * x) * std::pow(std::cos(M_PI * y), 2) -
       4 * M_PI * eps * rho1 * std::pow(std::sin(t), 3) * std::pow(std::sin(M_PI * y), 3) *
           std::pow(std::cos(M_PI * x), 3) +
       8 * M_PI * eps * rho1 * std::pow(std::sin(t), 3) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 3) * std::pow(std::cos(M_PI * y), 2) +
       8 * M_PI * eps * rho1 * std::pow(std::sin(t), 2) * std::pow(std::sin(M_PI * x), 2) *
           std::sin(M_PI * y) * std::cos(M_PI * y) +
       8 * M_PI * eps * rho1 * std::pow(std::sin(t), 2) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) -
       6 * eps * rho1 * std::sin(t) * std::sin(M_PI * y) * std::cos(t) *
           std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) -
       4 * eps * rho1 * std::sin(M_PI * y) * std::cos(t) * std::cos(M_PI * x) -
       12 * M_PI * eps * rho2 * std::pow(std::sin(t), 3) * std::pow(std::sin(M_PI * x), 2) *
           std::sin(M_PI * y) * std::cos(M_PI * x) * std::pow(std::cos(M_PI * y), 2) +
       4 * M_PI * eps * rho2 * std::pow(std::sin(t), 3) * std::pow(std::sin(M_PI * y), 3) *
           std::pow(std::cos(M_PI * x), 3) -
       8 * M_PI * eps * rho2 * std::pow(std::sin(t), 3) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 3) * std::pow(std::cos(M_PI * y), 2) +
       8 * M_PI * eps * rho2 * std::pow(std::sin(t), 2) * std::pow(std::sin(M_PI * x), 2) *
           std::sin(M_PI * y) * std::cos(M_PI * y) +
       8 * M_PI * eps * rho2 * std::pow(std::sin(t), 2) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) +
       6 * eps * rho2 * std::sin(t) * std::sin(M_PI * y) * std::cos(t) *
           std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) -
       4 * eps * rho2 * std::sin(M_PI * y) * std::cos(t) * std::cos(M_PI * x) +
       8 * M_PI * eps * std::sin(M_PI * x) * std::cos(t) * std::cos(M_PI * y) -
       36 * M_PI * sigma * std::pow(std::sin(t), 4) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 4) * std::pow(std::cos(M_PI * y), 3) -
       36 * M_PI * sigma * std::pow(std::sin(t), 3) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 3) * std::pow(std::cos(M_PI * y), 2) +
       12 * M_PI * sigma * std::pow(std::sin(t), 2) * std::sin(M_PI * y) *
           std::pow(std::cos(M_PI * x), 2) * std::cos(M_PI * y) +
       12 * M_PI * sigma * std::sin(t) * std::sin(M_PI * y) * std::cos(M_PI * x)) /
      eps;

  src[3] = 0.0;
  src[4] = -2 * std::sin(t) * std::sin(M_PI * x) * std::sin(M_PI * y);
  return src;
}

}  // namespace espdg::mms
