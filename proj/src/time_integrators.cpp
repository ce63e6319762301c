#include "espdg/time.hpp"

namespace espdg {

void Rk3Integrator::step(Field &q, double t, double dt) {
  static constexpr double ca[3] = {0.0, -5.0 / 9.0, -153.0 / 128.0};
  static constexpr double cb[3] = {1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0};
  static constexpr double ct[3] = {0.0, 1.0 / 3.0, 3.0 / 4.0};

  auto &g = reg_.raw();
  auto &qq = q.raw();
  if (g.size() != qq.size()) reg_.resize(q.n_elements(), q.nodes_per_element());
  std::fill(g.begin(), g.end(), 0.0);

  for (int s = 0; s < 3; ++s) {
    opt_.time = t + ct[s] * dt;
    op_->eval_residual(q, res_, opt_);
    const auto &r = res_.raw();
    for (size_t i = 0; i < g.size(); ++i) {
      g[i] = ca[s] * g[i] + dt * r[i];
      qq[i] += cb[s] * g[i];
    }
  }
}

ImexBdfIntegrator::ImexBdfIntegrator(DgOperator &op, ImplicitChOperator &implicit, int order,
                                     double dt, const OperatorOptions &opt)
    : op_(&op),
      implicit_(&implicit),
      target_order_(order),
      dt_(dt),
      opt_(opt),
      qnm1_(op.mesh()),
      qe_(op.mesh()),
      dqdt_(op.mesh()) {
  if (order < 1 || order > 2) throw Error("imex integrator: order must be 1 or 2");
  implicit_->factorize(bdf_coeffs(1).gamma0, dt);
  if (order == 2) implicit_->factorize(bdf_coeffs(2).gamma0, dt);
  const int n = op.n_dofs();
  ce_.resize(n);
  bce_.resize(n);
  rhs_.resize(n);
  cnew_.resize(n);
}

void ImexBdfIntegrator::step(Field &q, double t) {
  const int order = have_prev_ ? target_order_ : 1;
  const BdfCoeffs co = bdf_coeffs(order);
  last_order_ = order;

  const auto &qn = q.raw();
  const auto &qm = qnm1_.raw();
  auto &qe = qe_.raw();
  if (order == 1) {
    qe = qn;
  } else {
    for (size_t i = 0; i < qn.size(); ++i) qe[i] = co.ext0 * qn[i] + co.ext1 * qm[i];
  }

  opt_.time = t + dt_;
  op_->eval_residual(qe_, dqdt_, opt_);

  const int nelem = q.n_elements();
  const int npe = q.nodes_per_element();
  for (int e = 0; e < nelem; ++e)
    for (int p = 0; p < npe; ++p) ce_[op_->dof(e, p)] = qe_.at(e, p)[0];
  op_->apply_ch_biharmonic(ce_, bce_, implicit_->kappa_beta());

  for (int e = 0; e < nelem; ++e)
    for (int p = 0; p < npe; ++p) {
      const int i = op_->dof(e, p);
      const double chat = co.hat0 * q.at(e, p)[0] + co.hat1 * qnm1_.at(e, p)[0];
      rhs_[i] = chat / dt_ + dqdt_.at(e, p)[0] - bce_[i];
    }
  implicit_->solve(co.gamma0, dt_, rhs_, cnew_);

  // Momentum and pressure are fully explicit; concentration from the solve.
  for (int e = 0; e < nelem; ++e)
    for (int p = 0; p < npe; ++p) {
      double *out = qe_.at(e, p);
      const double *cur = q.at(e, p);
      const double *old = qnm1_.at(e, p);
      const double *rate = dqdt_.at(e, p);
      out[0] = cnew_[op_->dof(e, p)];
      for (int r = 1; r < 5; ++r) {
        const double hat = co.hat0 * cur[r] + co.hat1 * old[r];
        out[r] = (hat + dt_ * rate[r]) / co.gamma0;
      }
    }

  std::swap(qnm1_.raw(), q.raw());  // q^{n-1} <- q^n
  std::swap(q.raw(), qe_.raw());    // q^n <- q^{n+1}
  have_prev_ = true;
}

}  // namespace espdg
