#include "espdg/basis.hpp"

#include <algorithm>
#include <cmath>

namespace espdg {

namespace {

// Legendre polynomial P_N and its first derivative at xi.
void legendre(int n, double xi, double &p, double &dp) {
  double p0 = 1.0, p1 = xi;
  double dp0 = 0.0, dp1 = 1.0;
  if (n == 0) {
    p = p0;
    dp = dp0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
    const double dpk = dp0 + (2.0 * k - 1.0) * p1;
    p0 = p1;
    p1 = pk;
    dp0 = dp1;
    dp1 = dpk;
  }
  p = p1;
  dp = dp1;
}

}  // namespace

NodalBasis gauss_lobatto(int degree) { return NodalBasis(degree); }

NodalBasis::NodalBasis(int degree) : degree_(degree) {
  if (degree < 1) throw Error("NodalBasis: degree must be >= 1 (endpoint-only basis unsupported)");
  const int n = degree;
  const int np = n + 1;
  nodes_.resize(np);
  weights_.resize(np);

  nodes_[0] = -1.0;
  nodes_[n] = 1.0;
  // Interior nodes: Newton on q(xi) = (1 - xi^2) P_N'(xi), with
  // q'(xi) = -N(N+1) P_N(xi).  Chebyshev-Lobatto seeds.
  for (int i = 1; i < n; ++i) {
    double xi = -std::cos(M_PI * i / n);
    for (int it = 0; it < 50; ++it) {
      double p, dp;
      legendre(n, xi, p, dp);
      const double q = (1.0 - xi * xi) * dp;
      const double dq = -n * (n + 1.0) * p;
      const double delta = q / dq;
      xi -= delta;
      if (std::abs(delta) < 1e-15) break;
    }
    nodes_[i] = xi;
  }
  // Enforce exact symmetry of the node set.
  for (int i = 0; i <= n / 2; ++i) {
    const double s = 0.5 * (nodes_[i] - nodes_[n - i]);
    nodes_[i] = s;
    nodes_[n - i] = -s;
  }
  if (n % 2 == 0) nodes_[n / 2] = 0.0;

  for (int i = 0; i < np; ++i) {
    double p, dp;
    legendre(n, nodes_[i], p, dp);
    weights_[i] = 2.0 / (n * (n + 1.0) * p * p);
  }

  // Barycentric weights (scaled; only ratios matter).
  bary_.assign(np, 1.0);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      if (j != i) bary_[i] *= (nodes_[i] - nodes_[j]);
  double scale = 0.0;
  for (int i = 0; i < np; ++i) scale = std::max(scale, std::abs(bary_[i]));
  for (int i = 0; i < np; ++i) bary_[i] = scale / bary_[i];

  // D_ij = l_j'(xi_i) from the barycentric weights; the diagonal uses
  // the negative-sum trick so constants differentiate to exactly zero.
  d_.assign(np * np, 0.0);
  for (int i = 0; i < np; ++i) {
    double diag = 0.0;
    for (int j = 0; j < np; ++j) {
      if (j == i) continue;
      const double dij = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
      d_[i * np + j] = dij;
      diag -= dij;
    }
    d_[i * np + i] = diag;
  }

  dhat_.assign(np * np, 0.0);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      dhat_[i * np + j] = -(weights_[j] / weights_[i]) * d_[j * np + i];
}

double NodalBasis::interpolate(const std::vector<double> &nodal, double xi) const {
  return interpolate(nodal.data(), xi);
}

double NodalBasis::interpolate(const double *nodal, double xi) const {
  const int np = count();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < np; ++i) {
    const double dx = xi - nodes_[i];
    if (std::abs(dx) < 1e-14) return nodal[i];
    const double t = bary_[i] / dx;
    num += t * nodal[i];
    den += t;
  }
  return num / den;
}

}  // namespace espdg
