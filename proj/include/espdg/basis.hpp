#pragma once

#include <vector>

#include "espdg/types.hpp"

namespace espdg {

/// One-dimensional Gauss-Lobatto nodal basis.
///
/// Holds the collocation nodes in [-1,1], the quadrature weights, the
/// barycentric weights, and the two derivative operators used by the DG
/// kernels: D (strong, D_ij = l_j'(xi_i)) and Dhat (weak form,
/// Dhat_ij = -(w_j/w_i) D_ji).  With Q = diag(w) D, the SBP identity
/// Q + Q^T = diag(-1, 0, ..., 0, 1) holds to round-off.
class NodalBasis {
 public:
  explicit NodalBasis(int degree);

  int degree() const { return degree_; }
  int count() const { return degree_ + 1; }

  const std::vector<double> &nodes() const { return nodes_; }
  const std::vector<double> &weights() const { return weights_; }
  const std::vector<double> &bary() const { return bary_; }

  double node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }

  /// Strong derivative matrix entry D_ij = l_j'(xi_i).
  double d(int i, int j) const { return d_[i * count() + j]; }
  /// Weak derivative matrix entry Dhat_ij = -(w_j/w_i) D_ji.
  double dhat(int i, int j) const { return dhat_[i * count() + j]; }

  const std::vector<double> &d_matrix() const { return d_; }
  const std::vector<double> &dhat_matrix() const { return dhat_; }

  /// Barycentric Lagrange evaluation of nodal data at xi in [-1,1].
  double interpolate(const std::vector<double> &nodal, double xi) const;
  double interpolate(const double *nodal, double xi) const;

 private:
  int degree_;
  std::vector<double> nodes_, weights_, bary_;
  std::vector<double> d_, dhat_;
};

/// Builds the Gauss-Lobatto basis of the given degree (N >= 1).
/// Nodes are the roots of (1 - xi^2) P_N'(xi), found by Newton iteration
/// from Chebyshev-Lobatto initial guesses.
NodalBasis gauss_lobatto(int degree);

}  // namespace espdg
