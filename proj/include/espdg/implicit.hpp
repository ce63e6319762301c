#pragma once

#include <memory>
#include <vector>

#include "espdg/operator.hpp"

namespace espdg {

/// Implicit operator for the fourth-order Cahn-Hilliard term,
///   A = (gamma0/dt) diag(Jw) - diag(Jw) B,
/// with B the homogeneous composed biharmonic route of DgOperator. The
/// sparse matrix is assembled once by probing B with unit vectors (the mesh
/// is fixed for the whole run) and shared by all factorizations; one
/// factorization is cached per (gamma0, dt) pair, so the BDF startup order
/// and the steady order each get their own.
class ImplicitChOperator {
 public:
  ImplicitChOperator(DgOperator &op, double kappa_beta);
  ~ImplicitChOperator();

  void factorize(double gamma0, double dt);

  /// Solves A c = diag(Jw) rhs, rhs given point-wise. Throws if no
  /// factorization matches (gamma0, dt).
  void solve(double gamma0, double dt, const std::vector<double> &rhs,
             std::vector<double> &c) const;

  /// y = A x through the assembled matrix.
  void apply_assembled(double gamma0, double dt, const std::vector<double> &x,
                       std::vector<double> &y) const;

  /// y = A x through the matrix-free composition of the two DG passes.
  void apply_matrix_free(double gamma0, double dt, const std::vector<double> &x,
                         std::vector<double> &y);

  int size() const;
  double kappa_beta() const { return kappa_beta_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  DgOperator *op_;
  double kappa_beta_;
};

}  // namespace espdg
