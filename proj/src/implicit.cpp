#include "espdg/implicit.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace espdg {

namespace {
using SpMat = Eigen::SparseMatrix<double>;
using SpMap = Eigen::Map<const SpMat>;
}  // namespace

struct ImplicitChOperator::Impl {
  int n = 0;
  // CSC storage of K = -diag(Jw) B, built column by column while probing
  std::vector<int> outer, inner;
  std::vector<double> vals;
  bool symmetric = false;

  struct Fact {
    double gamma0 = 0.0, dt = 0.0;
    std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt;
    std::unique_ptr<Eigen::SparseLU<SpMat>> lu;
  };
  std::vector<Fact> facts;

  SpMap k_map() const {
    return SpMap(n, n, static_cast<int>(vals.size()), outer.data(), inner.data(), vals.data());
  }

  const Fact *find(double gamma0, double dt) const {
    for (const auto &f : facts)
      if (f.gamma0 == gamma0 && f.dt == dt) return &f;
    return nullptr;
  }
};

ImplicitChOperator::ImplicitChOperator(DgOperator &op, double kappa_beta)
    : impl_(std::make_unique<Impl>()), op_(&op), kappa_beta_(kappa_beta) {
  const int n = op.n_dofs();
  impl_->n = n;
  impl_->outer.reserve(n + 1);
  impl_->outer.push_back(0);

  std::vector<double> x(n, 0.0), y(n);
  for (int j = 0; j < n; ++j) {
    x[j] = 1.0;
    op_->apply_ch_biharmonic(x, y, kappa_beta_);
    x[j] = 0.0;
    const auto &jw = op_->dof_mass();
    for (int i = 0; i < n; ++i) {
      if (y[i] != 0.0) {
        impl_->inner.push_back(i);
        impl_->vals.push_back(-jw[i] * y[i]);
      }
    }
    impl_->outer.push_back(static_cast<int>(impl_->vals.size()));
  }

  // Symmetry decides between Cholesky and LU below.
  double maxabs = 0.0;
  for (double v : impl_->vals) maxabs = std::max(maxabs, std::abs(v));
  double defect = 0.0;
  for (int j = 0; j < n && defect <= 1e-10 * maxabs; ++j) {
    for (int p = impl_->outer[j]; p < impl_->outer[j + 1]; ++p) {
      const int i = impl_->inner[p];
      const int lo = impl_->outer[i], hi = impl_->outer[i + 1];
      const int *beg = impl_->inner.data() + lo;
      const int *end = impl_->inner.data() + hi;
      const int *it = std::lower_bound(beg, end, j);
      const double kji = (it != end && *it == j) ? impl_->vals[lo + (it - beg)] : 0.0;
      defect = std::max(defect, std::abs(kji - impl_->vals[p]));
    }
  }
  impl_->symmetric = defect <= 1e-10 * maxabs;
}

ImplicitChOperator::~ImplicitChOperator() = default;

int ImplicitChOperator::size() const { return impl_->n; }

void ImplicitChOperator::factorize(double gamma0, double dt) {
  if (impl_->find(gamma0, dt)) return;
  if (!(gamma0 > 0.0) || !(dt > 0.0)) throw Error("factorize: gamma0 and dt must be positive");
  const int n = impl_->n;
  const auto &jw = op_->dof_mass();

  SpMat diag(n, n);
  diag.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int i = 0; i < n; ++i) diag.insert(i, i) = gamma0 / dt * jw[i];
  diag.makeCompressed();

  SpMat a = diag + SpMat(impl_->k_map());
  a.makeCompressed();

  Impl::Fact fact;
  fact.gamma0 = gamma0;
  fact.dt = dt;
  if (impl_->symmetric) {
    fact.ldlt = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
    fact.ldlt->compute(a);
    if (fact.ldlt->info() != Eigen::Success)
      throw Error("implicit operator: Cholesky factorization failed");
  } else {
    fact.lu = std::make_unique<Eigen::SparseLU<SpMat>>();
    fact.lu->compute(a);
    if (fact.lu->info() != Eigen::Success)
      throw Error("implicit operator: LU factorization failed");
  }
  impl_->facts.push_back(std::move(fact));
}

void ImplicitChOperator::solve(double gamma0, double dt, const std::vector<double> &rhs,
                               std::vector<double> &c) const {
  const auto *fact = impl_->find(gamma0, dt);
  if (!fact) throw Error("implicit operator: no factorization for this (gamma0, dt)");
  const int n = impl_->n;
  const auto &jw = op_->dof_mass();
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = jw[i] * rhs[i];
  Eigen::VectorXd sol;
  if (fact->ldlt)
    sol = fact->ldlt->solve(b);
  else
    sol = fact->lu->solve(b);
  c.resize(n);
  for (int i = 0; i < n; ++i) c[i] = sol[i];
}

void ImplicitChOperator::apply_assembled(double gamma0, double dt, const std::vector<double> &x,
                                         std::vector<double> &y) const {
  const int n = impl_->n;
  const auto &jw = op_->dof_mass();
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
  Eigen::VectorXd kv = impl_->k_map() * xv;
  y.resize(n);
  for (int i = 0; i < n; ++i) y[i] = gamma0 / dt * jw[i] * x[i] + kv[i];
}

void ImplicitChOperator::apply_matrix_free(double gamma0, double dt, const std::vector<double> &x,
                                           std::vector<double> &y) {
  std::vector<double> bx;
  op_->apply_ch_biharmonic(x, bx, kappa_beta_);
  const int n = impl_->n;
  const auto &jw = op_->dof_mass();
  y.resize(n);
  for (int i = 0; i < n; ++i) y[i] = gamma0 / dt * jw[i] * x[i] - jw[i] * bx[i];
}

}  // namespace espdg
