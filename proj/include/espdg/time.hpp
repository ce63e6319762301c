#pragma once

#include "espdg/implicit.hpp"
#include "espdg/operator.hpp"

namespace espdg {

/// IMEX-BDF bookkeeping: gamma0 and the weights for the history term y-hat
/// and the explicit extrapolant y^{n+1,e}.
struct BdfCoeffs {
  int order = 1;
  double gamma0 = 1.0;
  double hat0 = 1.0, hat1 = 0.0;  // y-hat = hat0 y^n + hat1 y^{n-1}
  double ext0 = 1.0, ext1 = 0.0;  // y^{n+1,e} = ext0 y^n + ext1 y^{n-1}
};

inline BdfCoeffs bdf_coeffs(int order) {
  if (order == 1) return {1, 1.0, 1.0, 0.0, 1.0, 0.0};
  if (order == 2) return {2, 1.5, 2.0, -0.5, 2.0, -1.0};
  throw Error("bdf_coeffs: order must be 1 or 2");
}

/// Williamson low-storage three-stage third-order Runge-Kutta.
class Rk3Integrator {
 public:
  Rk3Integrator(DgOperator &op, const OperatorOptions &opt)
      : op_(&op), opt_(opt), reg_(op.mesh()), res_(op.mesh()) {}

  void step(Field &q, double t, double dt);

  OperatorOptions &options() { return opt_; }

 private:
  DgOperator *op_;
  OperatorOptions opt_;
  Field reg_, res_;
};

/// IMEX-BDF integrator: the fourth-order Cahn-Hilliard term implicit, the
/// rest explicit via extrapolation. The first step is first order; later
/// steps run at the requested order.
class ImexBdfIntegrator {
 public:
  ImexBdfIntegrator(DgOperator &op, ImplicitChOperator &implicit, int order, double dt,
                    const OperatorOptions &opt);

  void step(Field &q, double t);

  int last_order() const { return last_order_; }
  double dt() const { return dt_; }
  OperatorOptions &options() { return opt_; }
  /// Drops the history (e.g. after loading a restart snapshot).
  void reset() { have_prev_ = false; }

 private:
  DgOperator *op_;
  ImplicitChOperator *implicit_;
  int target_order_;
  double dt_;
  OperatorOptions opt_;
  bool have_prev_ = false;
  int last_order_ = 0;
  Field qnm1_, qe_, dqdt_;
  std::vector<double> ce_, bce_, rhs_, cnew_;
};

}  // namespace espdg
